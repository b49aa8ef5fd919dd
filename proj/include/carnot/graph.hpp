#pragma once

#include <functional>
#include <span>

#include "carnot/group.hpp"
#include "carnot/oracle.hpp"

namespace carnot {

/// Axis-aligned box [lo, hi].
struct Box {
  Vector lo;
  Vector hi;

  static Box cube(Eigen::Index dim, double half_width);
  Eigen::Index dim() const { return lo.size(); }
  bool contains(const Vector& w) const;
};

/// Orthonormal basis of xi^perp obtained by Gram-Schmidt on (xi, e_1, ..., e_m);
/// for xi = e_k it is the remaining coordinate axes in order. Columns.
Matrix orthogonal_complement(const Vector& xi);

/// xi-graph {(eta, tau) . (psi(eta, tau) xi, 0) : (eta, tau) in W}, with W a
/// box in coordinates (eta in the basis of xi^perp, tau).
class IntrinsicGraph {
 public:
  using Height = std::function<double(const Vector&)>;

  IntrinsicGraph(GroupSpec g, Vector xi, Box domain, Height psi);

  const GroupSpec& group() const { return g_; }
  const Vector& xi() const { return xi_; }
  const Box& domain() const { return domain_; }
  const Matrix& basis() const { return basis_; }

  double psi(const Vector& w) const;
  /// The point (eta(w), tau(w)) of xi^perp x T.
  Point embed(const Vector& w) const;
  /// Throws OutOfDomain outside W.
  Point graph_point(const Vector& w) const;

  struct Chart {
    Vector w;  ///< W-coordinates of the foot point
    double s;  ///< xi-coordinate: P = embed(w) . (s xi, 0)
  };
  /// Inverse of (w, s) -> embed(w) . (s xi, 0).
  Chart chart(const Point& p) const;

  /// {s > psi(w)} over W; Out off the cylinder.
  SetOracle epi_oracle() const;
  /// {s < psi(w)} over W; Out off the cylinder.
  SetOracle ipo_oracle() const;

 private:
  GroupSpec g_;
  Vector xi_;
  Box domain_;
  Height psi_;
  Matrix basis_;
};

/// X-graph in H x R: psi(y, u, t) = (a0 y + b t + c u) / (1 - 2 b y).
struct XGraphHR {
  double a0 = 0.0;
  double b = 0.0;
  double c = 0.0;

  /// Throws OutOfDomain when |y| >= 1/(2|b|).
  double psi(double y, double u, double t) const;
  /// Largest admissible |y| (infinity when b = 0).
  double y_limit() const;
  /// Intrinsic graph over the box |y| <= y_half, |u| <= half, |t| <= half;
  /// y_half must stay below y_limit().
  IntrinsicGraph graph(double half, double y_half) const;
};

/// Max over samples (y, u, t) of |x - (a0 y + c u + b t')| where (x, y, u, t')
/// is the graph point: the graph lies in the plane x = a0 y + c u + b t.
double xgraph_plane_identity(const XGraphHR& xg, std::span<const Vector> samples);

/// U-graph in H x R: u = a x + b y + c t.
struct UGraphHR {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  double psi(double x, double y, double t) const { return a * x + b * y + c * t; }
  IntrinsicGraph graph(double half) const;
};

}  // namespace carnot
