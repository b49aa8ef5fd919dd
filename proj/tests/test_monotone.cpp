#include <gtest/gtest.h>

#include <cmath>

#include "carnot/error.hpp"
#include "carnot/monotone.hpp"
#include "carnot/random.hpp"

using namespace carnot;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

ConvexityParams params_for(const GroupSpec& g, int pairs, double half = 1.0, std::uint64_t seed = 0) {
  ConvexityParams p;
  p.n_pairs = pairs;
  p.box = Box::cube(g.dim(), half);
  p.seed = seed;
  return p;
}

}  // namespace

TEST(HConvex, HalfSpaceHasNoViolations) {
  const GroupSpec g = heisenberg(1);
  const ConvexityReport r = hconvex_check(g, oracles::halfspace(g, vec({1, 0, 0}), 0.0), params_for(g, 10000));
  EXPECT_TRUE(r.passed());
  EXPECT_GT(r.pairs_tested, 1000);
}

TEST(HConvex, BallComplementViolates) {
  const GroupSpec g = heisenberg(1);
  const SetOracle outside = oracles::quasi_ball(g, Point::identity(g), 1.0).complement();
  const ConvexityReport r = hconvex_check(g, outside, params_for(g, 10000, 2.0));
  EXPECT_GT(r.violations, 0);
  ASSERT_FALSE(r.witnesses.empty());
  const SegmentWitness& w = r.witnesses.front();
  EXPECT_TRUE(outside.contains(w.p));
  EXPECT_TRUE(outside.contains(w.q));
  EXPECT_FALSE(outside.contains(w.point));
  EXPECT_GT(w.s, 0.0);
  EXPECT_LT(w.s, 1.0);
}

TEST(HConvex, EmptyIsVacuous) {
  const GroupSpec g = heisenberg(1);
  const ConvexityReport r = hconvex_check(g, oracles::nothing(), params_for(g, 100));
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.pairs_tested, 0);
}

TEST(HConvex, RejectsBadParams) {
  const GroupSpec g = heisenberg(1);
  ConvexityParams p = params_for(g, 0);
  EXPECT_THROW(hconvex_check(g, oracles::everything(), p), Error);
  p = params_for(g, 10);
  p.box.hi[0] = INFINITY;
  EXPECT_THROW(hconvex_check(g, oracles::everything(), p), Error);
  p = params_for(hr_product(), 10);
  EXPECT_THROW(hconvex_check(g, oracles::everything(), p), Error);
}

TEST(Monotone, RandomHyperplanes) {
  const GroupSpec g = hr_product();
  RandomStream rng(21, 0);
  for (int k = 0; k < 10; ++k) {
    const Vector a = rng.unit_vector(4);
    const Vector through = rng.uniform_box(Vector::Constant(4, -0.5), Vector::Constant(4, 0.5));
    const SetOracle e = oracles::halfspace(g, a, a.dot(through));
    const MonotonicityReport r = monotone_check(g, e, params_for(g, 2000, 1.0, k));
    EXPECT_EQ(r.verdict, MonotoneVerdict::Monotone);
    EXPECT_EQ(r.set.violations + r.complement.violations, 0);
  }
}

TEST(Monotone, PuncturedHalfPlane) {
  const GroupSpec g = heisenberg(1);
  const SetOracle e = oracles::punctured_upper_halfplane(g);
  const MonotonicityReport r = monotone_check(g, e, params_for(g, 10000));
  EXPECT_EQ(r.verdict, MonotoneVerdict::Monotone);
  const MidpointWitness w =
      euclidean_midpoint_witness(g, e, Point(vec({1, 0}), vec({1})), Point(vec({-1, 0}), vec({-1})));
  EXPECT_TRUE(w.endpoints_in);
  EXPECT_FALSE(w.midpoint_in);
  EXPECT_TRUE(w.shows_euclidean_nonconvexity());
  EXPECT_EQ(w.midpoint.coords().norm(), 0.0);
}

TEST(Monotone, EuclideanBall) {
  const GroupSpec g = heisenberg(1);
  const SetOracle ball = oracles::euclidean_ball(g, Vector::Zero(3), 1.0);
  const MonotonicityReport r = monotone_check(g, ball, params_for(g, 10000, 2.0));
  EXPECT_EQ(r.verdict, MonotoneVerdict::ComplementNotConvex);
  EXPECT_EQ(to_string(r.verdict), "ComplementNotConvex");
}

TEST(Monotone, SerialMatchesParallel) {
  const GroupSpec g = heisenberg(1);
  const SetOracle outside = oracles::quasi_ball(g, Point::identity(g), 1.0).complement();
  const auto p = params_for(g, 3000, 2.0, 9);
  const MonotonicityReport a = monotone_check(g, outside, p, Execution::Serial);
  const MonotonicityReport b = monotone_check(g, outside, p, Execution::Parallel);
  EXPECT_EQ(a.pairs_tested, b.pairs_tested);
  EXPECT_EQ(a.set.violations, b.set.violations);
  EXPECT_EQ(a.complement.violations, b.complement.violations);
  ASSERT_EQ(a.set.witnesses.size(), b.set.witnesses.size());
  for (std::size_t i = 0; i < a.set.witnesses.size(); ++i) {
    EXPECT_EQ(a.set.witnesses[i].point.coords(), b.set.witnesses[i].point.coords());
  }
}

TEST(HAffine, ClassifiedFormsPass) {
  const GroupSpec g = hr_product();
  const Box box = Box::cube(4, 1.0);
  const auto psi = [](const Point& p) { return 2 * p.t()[0] + 3 * p.z()[0] - p.z()[1]; };
  EXPECT_TRUE(haffine_check(g, psi, 2000, box, 0).affine_along_lines);
  EXPECT_TRUE(haffine_check(g, [](const Point&) { return 4.2; }, 500, box, 0).affine_along_lines);
  RandomStream rng(30, 0);
  for (int k = 0; k < 20; ++k) {
    const double c = rng.uniform(-5, 5), kx = rng.uniform(-5, 5), h = rng.uniform(-5, 5), d = rng.uniform(-5, 5);
    const auto f = [=](const Point& p) { return c * p.t()[0] + kx * p.z()[0] + h * p.z()[1] + d; };
    EXPECT_TRUE(haffine_check(g, f, 500, box, k).affine_along_lines);
  }
}

TEST(HAffine, NonAffineFail) {
  const GroupSpec g = hr_product();
  const Box box = Box::cube(4, 1.0);
  for (const auto& f : std::vector<std::function<double(const Point&)>>{
           [](const Point& p) { return p.z()[0] * p.z()[1]; },
           [](const Point& p) { return p.t()[0] * p.t()[0]; },
           [](const Point& p) { return std::abs(p.z()[0]); }}) {
    const AffineReport r = haffine_check(g, f, 2000, box, 1);
    EXPECT_FALSE(r.affine_along_lines);
    ASSERT_TRUE(r.witness.has_value());
    EXPECT_GT(std::abs(r.witness->lhs - r.witness->rhs), 1e-9);
  }
}

TEST(BoundaryLine, HalfSpace) {
  const GroupSpec g = hr_product();
  const SetOracle e = oracles::halfspace(g, vec({1, -1, -1, 0}), 0.0);
  // directions with u_x = u_y + u_u stay in the plane x = y + u; t does not enter
  const Point p = Point::from_coords(g, vec({0.3, 0.1, 0.2, 0.5}));
  const Point q = exp_horizontal(g, p, vec({1.0, 0.4, 0.6}));
  const BoundaryLineReport r = line_in_boundary_probe(g, e, p, q);
  EXPECT_TRUE(r.endpoints_on_boundary);
  EXPECT_DOUBLE_EQ(r.fraction, 1.0);
  const BoundaryLineReport same = line_in_boundary_probe(g, e, p, p);
  EXPECT_EQ(same.samples, 0);
  EXPECT_DOUBLE_EQ(same.fraction, 1.0);
  EXPECT_THROW(line_in_boundary_probe(g, e, p, Point::from_coords(g, vec({0.3, 0.1, 0.2, 0.7}))), Error);
}

TEST(BoundaryLine, BallTangentChord) {
  const GroupSpec g = heisenberg(1);
  const SetOracle ball = oracles::euclidean_ball(g, Vector::Zero(3), 1.0);
  const Point p = Point(vec({-1, 0}), vec({0}));
  // (-1 + s, s, 2 s) meets the unit sphere again at s = 1/3
  const Point q = exp_horizontal(g, p, vec({1.0 / 3, 1.0 / 3}));
  EXPECT_NEAR(q.coords().norm(), 1.0, 1e-15);
  const BoundaryLineReport r = line_in_boundary_probe(g, ball, p, q);
  EXPECT_LT(r.fraction, 1.0);
}

TEST(BoundaryInterior, NoBoundaryBoxes) {
  const GroupSpec g = hr_product();
  const SetOracle e = oracles::halfspace(g, vec({0, 0, 1, 0}), 0.0);
  EXPECT_EQ(boundary_interior_probe(g, e, Box::cube(4, 1.0), 200, 1e-3, 16, 1e-8, 0), 0);
  // a box straddling the plane still holds In and Out points away from it
  const Box thin{Vector::Constant(4, -1e-3), Vector::Constant(4, 1e-3)};
  EXPECT_EQ(boundary_interior_probe(g, e, thin, 50, 1e-3, 16, 1e-8, 1), 0);
}
