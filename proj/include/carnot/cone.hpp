#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "carnot/group.hpp"
#include "carnot/oracle.hpp"
#include "carnot/parallel.hpp"

namespace carnot {

/// Unit quasi-ball sample (zeta, tau) with max(|zeta|, |tau|^{1/2}) <= 1, drawn
/// uniformly from the box chart [-1,1]^m x [-1,1]^ell by rejection.
Point unit_quasi_ball_sample(const GroupSpec& g, std::uint64_t seed, std::uint64_t stream);

/// Samples of the balls B(base . (s xi, 0), eps s |xi|) for s in s_grid,
/// n_per_ball each, ordered by (s, sample). Sample j of grid cell i is
/// center . dilate(eps s |xi|, w_{ij}) for a fixed unit sample w_{ij}, so the
/// same seed gives rescaled copies of the same cloud for every eps.
std::vector<Point> cone_points(const GroupSpec& g, const Point& base, const Vector& xi, double epsilon,
                               const std::vector<double>& s_grid, int n_per_ball, std::uint64_t seed,
                               Execution exec = Execution::Parallel);

struct ConeCertificate {
  double epsilon = 0.0;
  double s_max = 0.0;
  int n_samples = 0;
  int violations = 0;
  std::optional<Point> witness;
  int attempts = 0;  ///< epsilon values tried

  bool passed() const { return violations == 0; }
};

struct ConeParams {
  double eps_start = 0.5;
  double shrink = 0.5;
  int max_shrinks = 10;  ///< eps_min = eps_start * shrink^max_shrinks
  double s_max = 1.0;
  int samples = 64;       ///< per ball
  int uniform_levels = 16;   ///< s = s_max k / n, k = 1..n
  int geometric_levels = 12; ///< s = s_max 2^{-j}, j = 1..n
  int hypothesis_samples = 64;
  std::uint64_t seed = 0;
};

/// Grid of cone parameters s in (0, s_max]: uniform levels plus geometric
/// levels toward the vertex, sorted ascending.
std::vector<double> cone_s_grid(const ConeParams& params);

/// Tests one fixed epsilon: counts cone samples classified Out.
ConeCertificate cone_test(const GroupSpec& g, const SetOracle& oracle, const Point& vertex, const Vector& xi,
                          double epsilon, const ConeParams& params, Execution exec = Execution::Parallel);

/// Searches epsilon = eps_start * shrink^k, k = 0..max_shrinks, and returns the
/// first passing certificate, or the failing one at the smallest epsilon.
/// Throws HypothesisFails unless the quasi-ball of radius eps_start |xi| / 4
/// around vertex . (xi, 0) is entirely In.
ConeCertificate cone_certify(const GroupSpec& g, const SetOracle& oracle, const Point& vertex, const Vector& xi,
                             const ConeParams& params, Execution exec = Execution::Parallel);

struct TransversalReport {
  int samples = 0;
  int in_count = 0;
  int out_count = 0;
  bool surface_in = true;  ///< every supplied surface sample classified In
  std::optional<Point> first_out;

  bool passed() const { return out_count == 0; }
};

/// Samples the open horizontal segment between p and q and counts In/Out
/// verdicts. Throws NotAligned when p^{-1} q has vertical part above 1e-10.
TransversalReport transversal_probe(const GroupSpec& g, const SetOracle& oracle, const Point& p, const Point& q,
                                    const std::vector<Point>& surface_samples, int segment_samples = 256);

}  // namespace carnot
