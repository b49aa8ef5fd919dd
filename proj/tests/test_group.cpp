#include <gtest/gtest.h>

#include <cmath>

#include "carnot/error.hpp"
#include "carnot/group.hpp"
#include "carnot/random.hpp"

using namespace carnot;

namespace {

Point pt(std::initializer_list<double> z, std::initializer_list<double> t) {
  Vector zv(static_cast<Eigen::Index>(z.size())), tv(static_cast<Eigen::Index>(t.size()));
  Eigen::Index i = 0;
  for (double v : z) zv[i++] = v;
  i = 0;
  for (double v : t) tv[i++] = v;
  return Point(zv, tv);
}

Point random_point(const GroupSpec& g, RandomStream& rng) {
  return Point(rng.normal_vector(g.m()), rng.normal_vector(g.ell()));
}

std::vector<GroupSpec> groups() { return {heisenberg(1), heisenberg(2), hr_product(), free_step2(3), free_step2(4)}; }

void expect_near(const Point& a, const Point& b, double tol) {
  EXPECT_LE((a.z() - b.z()).cwiseAbs().maxCoeff(), tol);
  if (a.t().size() > 0) {
    EXPECT_LE((a.t() - b.t()).cwiseAbs().maxCoeff(), tol);
  }
}

}  // namespace

TEST(GroupLaw, HeisenbergProduct) {
  const GroupSpec h = heisenberg(1);
  const Point p = mul(h, pt({1, 0}, {0}), pt({0, 1}, {0}));
  EXPECT_DOUBLE_EQ(p.z()[0], 1.0);
  EXPECT_DOUBLE_EQ(p.z()[1], 1.0);
  EXPECT_DOUBLE_EQ(p.t()[0], -2.0);
}

TEST(GroupLaw, DilationAndNorm) {
  const GroupSpec h = heisenberg(1);
  const Point d = dilate(h, 2.0, pt({1, 0}, {3}));
  EXPECT_DOUBLE_EQ(d.z()[0], 2.0);
  EXPECT_DOUBLE_EQ(d.z()[1], 0.0);
  EXPECT_DOUBLE_EQ(d.t()[0], 12.0);
  EXPECT_DOUBLE_EQ(quasi_norm(h, pt({0, 0}, {4})), 2.0);
  EXPECT_DOUBLE_EQ(quasi_norm(h, pt({3, 4}, {1})), 5.0);
}

TEST(GroupLaw, Properties) {
  for (const GroupSpec& g : groups()) {
    RandomStream rng(11, static_cast<std::uint64_t>(g.dim()));
    for (int k = 0; k < 200; ++k) {
      const Point a = random_point(g, rng), b = random_point(g, rng), c = random_point(g, rng);
      expect_near(mul(g, mul(g, a, b), c), mul(g, a, mul(g, b, c)), 1e-12);
      expect_near(mul(g, a, inverse(g, a)), Point::identity(g), 1e-12);
      expect_near(mul(g, Point::identity(g), a), a, 0.0);
      const double lam = rng.uniform(0.1, 3.0);
      expect_near(dilate(g, lam, mul(g, a, b)), mul(g, dilate(g, lam, a), dilate(g, lam, b)), 1e-11);
      EXPECT_NEAR(quasi_norm(g, dilate(g, lam, a)), lam * quasi_norm(g, a), 1e-12 * (1 + lam));
      EXPECT_NEAR(quasi_norm(g, inverse(g, a)), quasi_norm(g, a), 1e-12);
      // Q skew
      const Vector u = rng.normal_vector(g.m()), v = rng.normal_vector(g.m());
      EXPECT_LE((q_form(g, u, v) + q_form(g, v, u)).norm(), 1e-13);
    }
  }
}

TEST(GroupLaw, HorizontalLine) {
  const GroupSpec g = hr_product();
  RandomStream rng(3, 0);
  for (int k = 0; k < 100; ++k) {
    const Point base = random_point(g, rng);
    const Vector dir = rng.normal_vector(3);
    const HorizontalLine line(base, dir);
    const double s = rng.uniform(-2, 2);
    const Point p = line_point(g, line, s);
    EXPECT_LE((p.z() - (base.z() + s * dir)).norm(), 1e-13);
    EXPECT_LE((p.t() - (base.t() + s * q_form(g, base.z(), dir))).norm(), 1e-12);
    expect_near(p, exp_horizontal(g, base, s * dir), 1e-14);
  }
  EXPECT_THROW(HorizontalLine(Point::identity(g), Vector::Zero(3)), Error);
}

TEST(GroupSpecValidation, RejectsBadInput) {
  Matrix a(2, 2);
  a << 0, 1, 1, 0;
  try {
    make_group(2, 1, {a});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonSkew);
    EXPECT_NE(std::string(e.what()).find("A[0]"), std::string::npos);
  }
  Matrix b = Matrix::Zero(3, 3);
  try {
    make_group(2, 1, {b});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
  Matrix c(2, 2);
  c << 0, 1, -1 + 1e-13, 0;
  EXPECT_THROW(make_group(2, 1, {c}), Error);
  EXPECT_NO_THROW(make_group(2, 1, {c}, 1e-12));
  EXPECT_THROW(Point(Vector::Constant(2, NAN), Vector::Zero(1)), Error);
  EXPECT_THROW(mul(heisenberg(1), pt({1, 0, 0}, {0}), pt({1, 0}, {0})), Error);
}

TEST(Structure, Hormander) {
  EXPECT_TRUE(hormander_check(heisenberg(1)).holds);
  EXPECT_TRUE(hormander_check(hr_product()).holds);
  EXPECT_TRUE(hormander_check(free_step2(4)).holds);
  EXPECT_EQ(hormander_check(free_step2(4)).rank, 6);
  EXPECT_FALSE(hormander_check(abelian(2, 1)).holds);
  EXPECT_TRUE(hormander_check(abelian(3, 0)).holds);
  EXPECT_EQ(structure_matrix(heisenberg(1)).cols(), 1);
  EXPECT_DOUBLE_EQ(structure_matrix(heisenberg(1))(0, 0), -2.0);
}

TEST(Structure, Metivier) {
  EXPECT_EQ(metivier_probe(heisenberg(1), 64, 0).kind, MetivierKind::Metivier);
  EXPECT_EQ(metivier_probe(heisenberg(3), 64, 0).kind, MetivierKind::Metivier);
  const MetivierVerdict hr = metivier_probe(hr_product(), 64, 0);
  ASSERT_EQ(hr.kind, MetivierKind::NotMetivier);
  ASSERT_TRUE(hr.witness.has_value());
  EXPECT_DOUBLE_EQ((*hr.witness)[0], 0.0);
  EXPECT_DOUBLE_EQ((*hr.witness)[1], 0.0);
  EXPECT_DOUBLE_EQ((*hr.witness)[2], 1.0);
  // too many vertical directions for any z
  EXPECT_EQ(metivier_probe(free_step2(3), 16, 0).kind, MetivierKind::NotMetivier);
  EXPECT_EQ(metivier_probe(abelian(2, 0), 16, 0).kind, MetivierKind::Metivier);
}
