#include <gtest/gtest.h>

#include <cmath>

#include "carnot/classify.hpp"
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

// Both planes oriented with the set on the positive side; compare after unit normalization.
double plane_error(const ClassificationResult& r, const Vector& n, double d) {
  Vector got(5), want(5);
  got << r.normal, r.offset;
  want << n, d;
  return (got / got.head(4).norm() - want / want.head(4).norm()).cwiseAbs().maxCoeff();
}

}  // namespace

TEST(Bisect, FindsCrossing) {
  const GroupSpec g = hr_product();
  const SetOracle e = oracles::halfspace(g, vec({1, 0, 0, 0}), 0.3);
  const auto line = [&](double s) { return Point::from_coords(g, vec({s, 0, 0, 0})); };
  const auto s = bisect_line(e, line, 1e-9, 1e6);
  ASSERT_TRUE(s.has_value());
  EXPECT_NEAR(*s, 0.3, 1e-9);
  const auto far = [&](double s) { return Point::from_coords(g, vec({-s - 1e7, 0, 0, 0})); };
  EXPECT_FALSE(bisect_line(e, far, 1e-9, 1e6).has_value());
}

TEST(Classify, HorizontalPlane) {
  const GroupSpec g = hr_product();
  const auto r = classify_boundary(g, oracles::halfspace(g, vec({0, 0, 0, 1}), 0.0), Point::identity(g));
  EXPECT_EQ(r.boundary_case, BoundaryCase::HorizontalPlane);
  EXPECT_LE(plane_error(r, vec({0, 0, 0, 1}), 0.0), 1e-6);
  EXPECT_TRUE(r.verified);
}

TEST(Classify, UGraph) {
  const GroupSpec g = hr_product();
  const auto r = classify_boundary(g, oracles::halfspace(g, vec({-2, 1, 1, -3}), 0.0), Point::identity(g));
  ASSERT_EQ(r.boundary_case, BoundaryCase::UGraph);
  const Vector want = vec({2, -1, 3, 0});
  EXPECT_LE((r.coefficients - want).cwiseAbs().maxCoeff(), 1e-6 * 3);
  EXPECT_LE(r.residual, 1e-8);
  EXPECT_EQ(r.samples, 21 * 21 * 21);
}

TEST(Classify, XYGraph) {
  const GroupSpec g = hr_product();
  const auto r = classify_boundary(g, oracles::halfspace(g, vec({1, -1, -1, 0}), 0.0), Point::identity(g));
  ASSERT_EQ(r.boundary_case, BoundaryCase::XYGraph);
  const Vector want = vec({1, -1, -1, 0, 0});
  EXPECT_LE((r.coefficients - want).cwiseAbs().maxCoeff(), 1e-6);
  ASSERT_TRUE(r.direction.has_value());
  EXPECT_GT(r.direction->dot(vec({1, -1, 0})), 0.0);
}

TEST(Classify, RandomPlanesRoundTrip) {
  const GroupSpec g = hr_product();
  RandomStream rng(40, 0);
  ClassifyParams params;
  params.grid_n = 9;
  for (int k = 0; k < 12; ++k) {
    Vector n(4);
    for (int i = 0; i < 4; ++i) n[i] = rng.uniform(-10, 10);
    const Vector on = rng.uniform_box(Vector::Constant(4, -1), Vector::Constant(4, 1));
    const double d = n.dot(on);
    const Vector seed = on + 1e-3 * rng.unit_vector(4);
    const auto r = classify_boundary(g, oracles::halfspace(g, n, d), Point::from_coords(g, seed), params);
    // exactly one branch, chosen by the sign of the u-coefficient for generic planes
    EXPECT_EQ(r.boundary_case, n[2] > 0 ? BoundaryCase::UGraph : BoundaryCase::XYGraph) << k;
    EXPECT_LE(plane_error(r, n, d), 1e-6) << k;
    EXPECT_TRUE(r.verified) << k;
  }
}

TEST(Classify, SerialMatchesParallel) {
  const GroupSpec g = hr_product();
  const SetOracle e = oracles::halfspace(g, vec({0.5, 2, -1, 1.5}), 0.2);
  ClassifyParams params;
  params.grid_n = 7;
  const auto a = classify_boundary(g, e, Point::identity(g), params, Execution::Serial);
  const auto b = classify_boundary(g, e, Point::identity(g), params, Execution::Parallel);
  EXPECT_EQ(a.coefficients, b.coefficients);
  EXPECT_EQ(a.residual, b.residual);
}

TEST(Classify, Errors) {
  const GroupSpec g = hr_product();
  try {
    classify_boundary(g, oracles::everything(), Point::identity(g));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BoundaryNotFound);
  }
  try {
    classify_boundary(g, oracles::euclidean_ball(g, Vector::Zero(4), 1e-3), Point::identity(g));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::FitDegenerate);
  }
  const GroupSpec h = heisenberg(1);
  EXPECT_THROW(classify_boundary(h, oracles::everything(), Point::identity(h)), Error);
}

TEST(Classify, NoBoundaryInterior) {
  const GroupSpec g = hr_product();
  for (const Vector& n : {vec({0, 0, 0, 1}), vec({-2, 1, 1, -3}), vec({1, -1, -1, 0})}) {
    const SetOracle e = oracles::halfspace(g, n, 0.0);
    EXPECT_EQ(boundary_interior_probe(g, e, Box::cube(4, 1.0), 100, 1e-3, 16, 1e-8, 0), 0);
  }
}
