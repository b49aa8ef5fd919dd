#include "carnot/graph.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "carnot/error.hpp"

namespace carnot {

Box Box::cube(Eigen::Index dim, double half_width) {
  return {Vector::Constant(dim, -half_width), Vector::Constant(dim, half_width)};
}

bool Box::contains(const Vector& w) const {
  if (w.size() != lo.size()) return false;
  return (w.array() >= lo.array()).all() && (w.array() <= hi.array()).all();
}

Matrix orthogonal_complement(const Vector& xi) {
  const Eigen::Index m = xi.size();
  Matrix basis(m, m - 1);
  std::vector<Vector> accepted{xi.normalized()};
  Eigen::Index col = 0;
  for (Eigen::Index i = 0; i < m && col < m - 1; ++i) {
    Vector v = Vector::Unit(m, i);
    for (const Vector& a : accepted) v -= v.dot(a) * a;
    for (const Vector& a : accepted) v -= v.dot(a) * a;
    const double n = v.norm();
    if (n < 1e-8) continue;
    v /= n;
    accepted.push_back(v);
    basis.col(col++) = v;
  }
  return basis;
}

IntrinsicGraph::IntrinsicGraph(GroupSpec g, Vector xi, Box domain, Height psi)
    : g_(std::move(g)), xi_(std::move(xi)), domain_(std::move(domain)), psi_(std::move(psi)) {
  if (xi_.size() != g_.m()) throw Error(ErrorCode::DimensionMismatch, "xi has wrong size");
  if (std::abs(xi_.norm() - 1.0) > 1e-12) throw Error(ErrorCode::InvalidArgument, "xi must be a unit vector");
  if (domain_.dim() != g_.m() - 1 + g_.ell() || domain_.hi.size() != domain_.lo.size()) {
    throw Error(ErrorCode::DimensionMismatch, "domain must live in xi^perp x T coordinates");
  }
  basis_ = orthogonal_complement(xi_);
}

double IntrinsicGraph::psi(const Vector& w) const {
  if (!domain_.contains(w)) throw Error(ErrorCode::OutOfDomain, "point outside the graph domain");
  return psi_(w);
}

Point IntrinsicGraph::embed(const Vector& w) const {
  const Eigen::Index k = g_.m() - 1;
  return Point(basis_ * w.head(k), w.tail(g_.ell()));
}

Point IntrinsicGraph::graph_point(const Vector& w) const {
  const double h = psi(w);
  return exp_horizontal(g_, embed(w), h * xi_);
}

IntrinsicGraph::Chart IntrinsicGraph::chart(const Point& p) const {
  check_point(g_, p);
  const double s = xi_.dot(p.z());
  const Vector eta = p.z() - s * xi_;
  const Vector tau = p.t() - s * q_form(g_, eta, xi_);
  Vector w(domain_.dim());
  w << basis_.transpose() * eta, tau;
  return {std::move(w), s};
}

SetOracle IntrinsicGraph::epi_oracle() const {
  return SetOracle(
      [self = *this](const Point& p) {
        const Chart c = self.chart(p);
        return self.domain_.contains(c.w) && c.s > self.psi_(c.w);
      },
      "epi");
}

SetOracle IntrinsicGraph::ipo_oracle() const {
  return SetOracle(
      [self = *this](const Point& p) {
        const Chart c = self.chart(p);
        return self.domain_.contains(c.w) && c.s < self.psi_(c.w);
      },
      "ipo");
}

double XGraphHR::y_limit() const {
  return b == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / (2.0 * std::abs(b));
}

double XGraphHR::psi(double y, double u, double t) const {
  if (!(std::abs(y) < y_limit())) {
    std::ostringstream msg;
    msg << "X-graph undefined at y = " << y << " (|y| must stay below " << y_limit() << ")";
    throw Error(ErrorCode::OutOfDomain, msg.str());
  }
  return (a0 * y + b * t + c * u) / (1.0 - 2.0 * b * y);
}

IntrinsicGraph XGraphHR::graph(double half, double y_half) const {
  if (!(y_half < y_limit())) throw Error(ErrorCode::OutOfDomain, "X-graph domain reaches the pole 1/(2|b|)");
  Box box{Vector(3), Vector(3)};
  box.lo << -y_half, -half, -half;
  box.hi << y_half, half, half;
  const XGraphHR self = *this;
  return IntrinsicGraph(hr_product(), Vector::Unit(3, 0), box,
                        [self](const Vector& w) { return self.psi(w[0], w[1], w[2]); });
}

double xgraph_plane_identity(const XGraphHR& xg, std::span<const Vector> samples) {
  const GroupSpec g = hr_product();
  const Vector ex = Vector::Unit(3, 0);
  double worst = 0.0;
  for (const Vector& w : samples) {
    const double h = xg.psi(w[0], w[1], w[2]);
    Vector eta(3);
    eta << 0.0, w[0], w[1];
    const Point p = exp_horizontal(g, Point(eta, w.tail(1)), h * ex);
    const double x = p.z()[0], y = p.z()[1], u = p.z()[2], t = p.t()[0];
    worst = std::max(worst, std::abs(x - (xg.a0 * y + xg.c * u + xg.b * t)));
  }
  return worst;
}

IntrinsicGraph UGraphHR::graph(double half) const {
  const UGraphHR self = *this;
  return IntrinsicGraph(hr_product(), Vector::Unit(3, 2), Box::cube(3, half),
                        [self](const Vector& w) { return self.psi(w[0], w[1], w[2]); });
}

}  // namespace carnot
