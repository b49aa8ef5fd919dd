#include "carnot/oracle.hpp"

#include <sstream>

#include "carnot/error.hpp"

namespace carnot {

SetOracle SetOracle::complement() const {
  return SetOracle([inner = contains_](const Point& p) { return !inner(p); }, "complement(" + label_ + ")");
}

SetOracle SetOracle::translated(const GroupSpec& g, const Point& g0) const {
  return SetOracle([inner = contains_, g, g0](const Point& p) { return inner(mul(g, g0, p)); },
                   "translated(" + label_ + ")");
}

namespace oracles {

SetOracle everything() {
  return SetOracle([](const Point&) { return true; }, "everything");
}

SetOracle nothing() {
  return SetOracle([](const Point&) { return false; }, "nothing");
}

SetOracle halfspace(const GroupSpec& g, const Vector& a, double d) {
  if (a.size() != g.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "half-space normal must have m + ell entries");
  }
  std::ostringstream label;
  label << "halfspace(" << a.transpose() << " > " << d << ")";
  const int m = g.m();
  return SetOracle(
      [a, d, m](const Point& p) {
        return a.head(m).dot(p.z()) + a.tail(a.size() - m).dot(p.t()) > d;
      },
      label.str());
}

SetOracle euclidean_ball(const GroupSpec& g, const Vector& center, double radius) {
  if (center.size() != g.dim()) throw Error(ErrorCode::DimensionMismatch, "ball center has wrong size");
  return SetOracle([center, radius](const Point& p) { return (p.coords() - center).norm() <= radius; },
                   "euclidean_ball");
}

SetOracle quasi_ball(const GroupSpec& g, const Point& center, double radius) {
  check_point(g, center);
  return SetOracle([g, center, radius](const Point& p) { return quasi_dist(g, center, p) <= radius; },
                   "quasi_ball");
}

SetOracle punctured_upper_halfplane(const GroupSpec& g) {
  if (g.m() != 2 || g.ell() != 1) {
    throw Error(ErrorCode::DimensionMismatch, "punctured half-plane is defined in H^1");
  }
  return SetOracle(
      [](const Point& p) {
        const double y = p.z()[1];
        const double t = p.t()[0];
        return y >= 0.0 && !(y == 0.0 && t == 0.0);
      },
      "punctured_upper_halfplane");
}

}  // namespace oracles

}  // namespace carnot
