#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "carnot/graph.hpp"
#include "carnot/group.hpp"
#include "carnot/oracle.hpp"
#include "carnot/parallel.hpp"

namespace carnot {

/// Aligned pair P, Q = P . (u, 0) in the set with an Out point at P . (s u, 0).
struct SegmentWitness {
  Point p;
  Point q;
  double s;
  Point point;
};

struct ConvexityParams {
  int n_pairs = 10000;
  int line_samples = 8;       ///< s-samples in (0, 1) per pair
  int point_attempts = 32;    ///< rejection attempts to draw P in the set
  Box box;                    ///< sampling box in stacked (z, t) coordinates
  double step = 0.0;          ///< |u_i| <= step; 0 means the box's largest horizontal half-width
  int max_witnesses = 16;
  std::uint64_t seed = 0;
};

struct ConvexityReport {
  int pairs_tested = 0;  ///< pairs with both endpoints In
  int violations = 0;
  std::vector<SegmentWitness> witnesses;  ///< first max_witnesses violations by pair index

  bool passed() const { return violations == 0; }
};

/// Sampling check of horizontal convexity: for aligned P, Q in the set, every
/// sampled point of the segment between them must be In.
ConvexityReport hconvex_check(const GroupSpec& g, const SetOracle& oracle, const ConvexityParams& params,
                              Execution exec = Execution::Parallel);

enum class MonotoneVerdict { Monotone, NotConvex, ComplementNotConvex, Both };
std::string to_string(MonotoneVerdict v);

struct MonotonicityReport {
  int pairs_tested = 0;
  ConvexityReport set;
  ConvexityReport complement;
  MonotoneVerdict verdict = MonotoneVerdict::Monotone;
};

/// hconvex_check on the set and on its complement (independent streams).
MonotonicityReport monotone_check(const GroupSpec& g, const SetOracle& oracle, const ConvexityParams& params,
                                  Execution exec = Execution::Parallel);

struct MidpointWitness {
  Point p;
  Point q;
  Point midpoint;
  bool endpoints_in;
  bool midpoint_in;

  /// Both endpoints In and the coordinate midpoint Out.
  bool shows_euclidean_nonconvexity() const { return endpoints_in && !midpoint_in; }
};

MidpointWitness euclidean_midpoint_witness(const GroupSpec& g, const SetOracle& oracle, const Point& p,
                                           const Point& q);

struct AffineWitness {
  Point base;
  Vector zeta;
  double lambda;
  double lhs;  ///< psi(P . (lambda zeta, 0)) - psi(P)
  double rhs;  ///< lambda [psi(P . (zeta, 0)) - psi(P)]
};

struct AffineReport {
  bool affine_along_lines = true;
  int samples = 0;
  std::optional<AffineWitness> witness;
};

/// Checks psi(P . (lambda zeta, 0)) - psi(P) = lambda [psi(P . (zeta, 0)) - psi(P)]
/// to 1e-9 relative on random P in the box, zeta in the box's horizontal
/// range and lambda in [-2, 2].
AffineReport haffine_check(const GroupSpec& g, const std::function<double(const Point&)>& psi, int n_samples,
                           const Box& box, std::uint64_t seed, double rel_tol = 1e-9,
                           Execution exec = Execution::Parallel);

/// True when some P +- delta e_i (stacked coordinates) differs from P in verdict.
bool near_boundary(const GroupSpec& g, const SetOracle& oracle, const Point& p, double delta);

struct BoundaryLineParams {
  int samples = 201;
  double extent = 1.0;        ///< samples s in [-extent, 1 + extent] along P . (s u, 0)
  double boundary_width = 1e-8;
};

struct BoundaryLineReport {
  int samples = 0;
  int near_boundary = 0;
  bool endpoints_on_boundary = false;
  double fraction = 1.0;
};

/// Fraction of samples of the full line through aligned P, Q that lie within
/// boundary_width of the boundary. Throws NotAligned.
BoundaryLineReport line_in_boundary_probe(const GroupSpec& g, const SetOracle& oracle, const Point& p,
                                          const Point& q, const BoundaryLineParams& params = {});

/// Draws n_boxes random cubes of half-width `radius` centered in `box` and
/// counts those whose samples are all within `delta` of the boundary.
int boundary_interior_probe(const GroupSpec& g, const SetOracle& oracle, const Box& box, int n_boxes, double radius,
                            int samples_per_box, double delta, std::uint64_t seed,
                            Execution exec = Execution::Parallel);

}  // namespace carnot
