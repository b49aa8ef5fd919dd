#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "carnot/error.hpp"
#include "carnot/graph.hpp"
#include "carnot/random.hpp"

using namespace carnot;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

}  // namespace

TEST(Complement, Orthonormal) {
  RandomStream rng(1, 0);
  for (int k = 0; k < 20; ++k) {
    const Vector xi = rng.unit_vector(4);
    const Matrix B = orthogonal_complement(xi);
    ASSERT_EQ(B.cols(), 3);
    EXPECT_LE((B.transpose() * B - Matrix::Identity(3, 3)).norm(), 1e-12);
    EXPECT_LE((B.transpose() * xi).norm(), 1e-12);
  }
  const Matrix E = orthogonal_complement(Vector::Unit(3, 1));
  EXPECT_LE((E.col(0) - Vector::Unit(3, 0)).norm(), 1e-15);
  EXPECT_LE((E.col(1) - Vector::Unit(3, 2)).norm(), 1e-15);
}

TEST(IntrinsicGraph, ZeroHeight) {
  const GroupSpec g = heisenberg(1);
  const IntrinsicGraph gr(g, Vector::Unit(2, 0), Box::cube(2, 1.0), [](const Vector&) { return 0.0; });
  RandomStream rng(2, 0);
  const SetOracle epi = gr.epi_oracle();
  for (int k = 0; k < 100; ++k) {
    const Vector w = rng.uniform_box(Vector::Constant(2, -1), Vector::Constant(2, 1));
    const Point p = gr.graph_point(w);
    EXPECT_NEAR(gr.chart(p).s, 0.0, 1e-14);
    const double s = rng.uniform(0.01, 1.0);
    EXPECT_TRUE(epi.contains(exp_horizontal(g, p, s * gr.xi())));
    EXPECT_FALSE(epi.contains(exp_horizontal(g, p, -s * gr.xi())));
  }
  EXPECT_THROW(gr.graph_point(vec({2.0, 0.0})), Error);
  EXPECT_FALSE(epi.contains(Point(vec({0.5, 3.0}), vec({0.0}))));
  EXPECT_THROW(IntrinsicGraph(g, vec({1, 1}), Box::cube(2, 1), [](const Vector&) { return 0.0; }), Error);
}

TEST(IntrinsicGraph, ChartInverts) {
  const GroupSpec g = hr_product();
  RandomStream rng(3, 0);
  const Vector xi = rng.unit_vector(3);
  const IntrinsicGraph gr(g, xi, Box::cube(3, 2.0), [](const Vector& w) { return w[0] * w[1] + w[2]; });
  for (int k = 0; k < 100; ++k) {
    const Vector w = rng.uniform_box(Vector::Constant(3, -1), Vector::Constant(3, 1));
    const double s = rng.uniform(-1, 1);
    const Point p = exp_horizontal(g, gr.embed(w), s * xi);
    const auto ch = gr.chart(p);
    EXPECT_NEAR(ch.s, s, 1e-12);
    EXPECT_LE((ch.w - w).norm(), 1e-12);
  }
}

TEST(IntrinsicGraph, EpiIpoPartition) {
  const GroupSpec g = hr_product();
  const XGraphHR xg{0.7, 0.4, -0.3};
  const IntrinsicGraph gr = xg.graph(1.0, 0.9 * xg.y_limit());
  const SetOracle epi = gr.epi_oracle(), ipo = gr.ipo_oracle();
  RandomStream rng(4, 0);
  const Box& W = gr.domain();
  for (int k = 0; k < 2000; ++k) {
    const Vector w = rng.uniform_box(W.lo, W.hi);
    const double s = rng.uniform(-2, 2);
    const Point p = exp_horizontal(g, gr.embed(w), s * gr.xi());
    const bool on_graph = std::abs(s - gr.psi(w)) <= 1e-9;
    const int count = int(epi.contains(p)) + int(ipo.contains(p));
    if (on_graph) EXPECT_LE(count, 1);
    else EXPECT_EQ(count, 1);
  }
}

TEST(XGraph, WorkedPoint) {
  const XGraphHR xg{1.0, 1.0, 0.0};
  EXPECT_NEAR(xg.psi(0.1, 0.0, 0.0), 0.125, 1e-15);
  const IntrinsicGraph gr = xg.graph(0.5, 0.4);
  const Point p = gr.graph_point(vec({0.1, 0.0, 0.0}));
  EXPECT_NEAR(p.z()[0], 0.125, 1e-15);
  EXPECT_NEAR(p.z()[1], 0.1, 1e-15);
  EXPECT_NEAR(p.z()[2], 0.0, 1e-15);
  EXPECT_NEAR(p.t()[0], 0.025, 1e-15);
  const std::vector<Vector> samples{vec({0.1, 0.0, 0.0})};
  EXPECT_LE(xgraph_plane_identity(xg, samples), 1e-15);
}

TEST(XGraph, PlaneIdentityRandom) {
  RandomStream rng(5, 0);
  for (int k = 0; k < 20; ++k) {
    const XGraphHR xg{rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3)};
    std::vector<Vector> samples;
    const double yl = std::min(0.99 * xg.y_limit(), 1.0);
    for (int j = 0; j < 500; ++j) samples.push_back(vec({rng.uniform(-yl, yl), rng.uniform(-1, 1), rng.uniform(-1, 1)}));
    EXPECT_LE(xgraph_plane_identity(xg, samples), 1e-12 * (1 + 1.0 / (1 - 2 * std::abs(xg.b) * yl)));
  }
}

TEST(XGraph, DomainPole) {
  const XGraphHR xg{0.0, 1.0, 0.0};
  EXPECT_DOUBLE_EQ(xg.y_limit(), 0.5);
  EXPECT_THROW(xg.psi(0.5, 0, 0), Error);
  EXPECT_THROW(xg.psi(-0.7, 0, 0), Error);
  EXPECT_TRUE(std::isinf(XGraphHR{1, 0, 2}.y_limit()));
  const std::vector<Vector> bad{vec({0.6, 0, 0})};
  EXPECT_THROW(xgraph_plane_identity(xg, bad), Error);
  // b = 0: psi is affine
  const XGraphHR flat{2.0, 0.0, -1.0};
  EXPECT_DOUBLE_EQ(flat.psi(0.5, 2.0, 7.0), -1.0);
}

TEST(UGraph, Plane) {
  const UGraphHR ug{2, -1, 3};
  const IntrinsicGraph gr = ug.graph(1.0);
  RandomStream rng(6, 0);
  for (int k = 0; k < 100; ++k) {
    const Vector w = rng.uniform_box(gr.domain().lo, gr.domain().hi);
    const Point p = gr.graph_point(w);
    EXPECT_NEAR(p.z()[2], 2 * p.z()[0] - p.z()[1] + 3 * p.t()[0], 1e-12);
  }
}
