#pragma once

#include <functional>
#include <string>

#include "carnot/group.hpp"

namespace carnot {

enum class Verdict { In, Out };

inline Verdict verdict_of(bool inside) { return inside ? Verdict::In : Verdict::Out; }

/// A set given by a membership predicate. The predicate must be pure and safe
/// to call concurrently.
class SetOracle {
 public:
  using Predicate = std::function<bool(const Point&)>;

  SetOracle(Predicate contains, std::string label)
      : contains_(std::move(contains)), label_(std::move(label)) {}

  bool contains(const Point& p) const { return contains_(p); }
  Verdict classify(const Point& p) const { return verdict_of(contains_(p)); }
  const std::string& label() const { return label_; }

  SetOracle complement() const;
  /// The set {P : g0 . P in this}, i.e. this set left-translated by g0^{-1}.
  SetOracle translated(const GroupSpec& g, const Point& g0) const;

 private:
  Predicate contains_;
  std::string label_;
};

namespace oracles {

SetOracle everything();
SetOracle nothing();
/// Euclidean half-space {a . (z, t) > d} in stacked coordinates.
SetOracle halfspace(const GroupSpec& g, const Vector& a, double d);
SetOracle euclidean_ball(const GroupSpec& g, const Vector& center, double radius);
/// {P : quasi_dist(center, P) <= radius}.
SetOracle quasi_ball(const GroupSpec& g, const Point& center, double radius);
/// {y >= 0} minus the x-axis {(x, 0, 0)} in H^1: monotone but not Euclidean convex.
SetOracle punctured_upper_halfplane(const GroupSpec& g);

}  // namespace oracles

}  // namespace carnot
