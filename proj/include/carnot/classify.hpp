#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "carnot/group.hpp"
#include "carnot/oracle.hpp"
#include "carnot/parallel.hpp"

namespace carnot {

enum class BoundaryCase { HorizontalPlane, UGraph, XYGraph };
std::string to_string(BoundaryCase c);

struct ClassifyParams {
  int grid_n = 21;             ///< fit grid is grid_n^3 lines
  double half = 0.5;           ///< fit grid half-width around the boundary point
  double bracket_tol = 1e-9;   ///< bisection bracket width
  double max_bracket = 1e6;    ///< give up expanding the bracket beyond this
  double interior_radius = 1e-4;
  int interior_samples = 32;
  int directions = 8;          ///< horizontal probe directions (cos, sin, 0, 0)
  double verify_scale = 4.0;   ///< global check box = verify_scale * half
  int verify_n = 7;
  double verify_tol = 1e-6;
  std::uint64_t seed = 0;
};

/// The boundary plane is n . (x, y, u, t) = offset with the set on the side
/// n . X > offset. Normalization depends on the case:
///   HorizontalPlane: |n_t| = 1;
///   UGraph:          |n_u| = 1, coefficients (a, b, c, d) of u = ax + by + ct + d;
///   XYGraph:         |n_x| = 1 (|n_y| = 1 when n_x vanishes), coefficients
///                    (r, s, c, b, d) of rx + sy + cu + bt = d.
struct ClassificationResult {
  BoundaryCase boundary_case = BoundaryCase::HorizontalPlane;
  Vector coefficients;
  Vector normal;           ///< (n_x, n_y, n_u, n_t)
  double offset = 0.0;
  double residual = 0.0;          ///< max distance of fitted boundary points from the plane
  double global_residual = 0.0;   ///< same on the larger verification grid
  bool verified = false;          ///< global_residual <= verify_tol
  int samples = 0;                ///< boundary points used in the fit
  Point boundary_point;           ///< bisected boundary point near the seed
  std::optional<Vector> direction;  ///< horizontal probe direction of the XYGraph branch
};

/// Bisects along s -> line(s) for a verdict change starting at s = 0. The
/// bracket [-L, L] starts at L = 1 and doubles up to max_bracket. Returns the
/// midpoint parameter of the final bracket, or nullopt without a sign change.
std::optional<double> bisect_line(const SetOracle& oracle, const std::function<Point(double)>& line, double tol,
                                  double max_bracket);

/// True when every sample of a small stacked-coordinate box around p
/// (and p itself) classifies In.
bool probably_interior(const GroupSpec& g, const SetOracle& oracle, const Point& p, double radius, int samples,
                       std::uint64_t seed, std::uint64_t stream);

/// Classifies the boundary of an (assumed monotone) set in H x R near
/// seed_point. Throws BoundaryNotFound and FitDegenerate.
ClassificationResult classify_boundary(const GroupSpec& g, const SetOracle& oracle, const Point& seed_point,
                                       const ClassifyParams& params = {}, Execution exec = Execution::Parallel);

}  // namespace carnot
