#include "carnot/cone.hpp"

#include <algorithm>
#include <cmath>

#include "carnot/error.hpp"
#include "carnot/random.hpp"

namespace carnot {

Point unit_quasi_ball_sample(const GroupSpec& g, std::uint64_t seed, std::uint64_t stream) {
  RandomStream rng(seed, stream);
  const Vector zlo = Vector::Constant(g.m(), -1.0), zhi = Vector::Constant(g.m(), 1.0);
  const Vector tlo = Vector::Constant(g.ell(), -1.0), thi = Vector::Constant(g.ell(), 1.0);
  for (;;) {
    Vector zeta = rng.uniform_box(zlo, zhi);
    Vector tau = rng.uniform_box(tlo, thi);
    if (zeta.norm() <= 1.0 && tau.norm() <= 1.0) return Point(std::move(zeta), std::move(tau));
  }
}

std::vector<Point> cone_points(const GroupSpec& g, const Point& base, const Vector& xi, double epsilon,
                               const std::vector<double>& s_grid, int n_per_ball, std::uint64_t seed,
                               Execution exec) {
  check_point(g, base);
  if (!(epsilon > 0.0)) throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
  if (n_per_ball < 1) throw Error(ErrorCode::InvalidArgument, "n_per_ball must be >= 1");
  const double xi_norm = xi.norm();
  const auto per = static_cast<std::size_t>(n_per_ball);
  std::vector<Point> out(s_grid.size() * per);
  for_each_index(out.size(), exec, [&](std::size_t idx) {
    const double s = s_grid[idx / per];
    const Point center = exp_horizontal(g, base, s * xi);
    const Point w = unit_quasi_ball_sample(g, seed, idx);
    out[idx] = mul(g, center, dilate(g, epsilon * s * xi_norm, w));
  });
  return out;
}

std::vector<double> cone_s_grid(const ConeParams& params) {
  if (!(params.s_max > 0.0)) throw Error(ErrorCode::InvalidArgument, "s_max must be positive");
  std::vector<double> grid;
  for (int k = 1; k <= params.uniform_levels; ++k) grid.push_back(params.s_max * k / params.uniform_levels);
  for (int j = 1; j <= params.geometric_levels; ++j) grid.push_back(params.s_max * std::ldexp(1.0, -j));
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

ConeCertificate cone_test(const GroupSpec& g, const SetOracle& oracle, const Point& vertex, const Vector& xi,
                          double epsilon, const ConeParams& params, Execution exec) {
  const std::vector<double> grid = cone_s_grid(params);
  const std::vector<Point> pts = cone_points(g, vertex, xi, epsilon, grid, params.samples, params.seed, exec);
  std::vector<char> out(pts.size(), 0);
  for_each_index(pts.size(), exec, [&](std::size_t i) { out[i] = oracle.contains(pts[i]) ? 0 : 1; });

  ConeCertificate cert;
  cert.epsilon = epsilon;
  cert.s_max = params.s_max;
  cert.n_samples = static_cast<int>(pts.size());
  cert.attempts = 1;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (!out[i]) continue;
    if (cert.violations == 0) cert.witness = pts[i];
    ++cert.violations;
  }
  return cert;
}

ConeCertificate cone_certify(const GroupSpec& g, const SetOracle& oracle, const Point& vertex, const Vector& xi,
                             const ConeParams& params, Execution exec) {
  check_point(g, vertex);
  if (xi.size() != g.m()) throw Error(ErrorCode::DimensionMismatch, "xi has wrong size");
  if (!(params.eps_start > 0.0) || !(params.shrink > 0.0 && params.shrink < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "need eps_start > 0 and shrink in (0, 1)");
  }
  // The point vertex . (xi, 0) must be interior: a small quasi-ball around it is In.
  const Point inner = exp_horizontal(g, vertex, xi);
  const double radius = params.eps_start * xi.norm() / 4.0;
  bool interior = oracle.contains(inner);
  for (int j = 0; interior && j < params.hypothesis_samples; ++j) {
    const Point w = unit_quasi_ball_sample(g, params.seed, (1ull << 40) + static_cast<std::uint64_t>(j));
    interior = oracle.contains(mul(g, inner, dilate(g, radius, w)));
  }
  if (!interior) {
    throw Error(ErrorCode::HypothesisFails, "the ball around vertex . (xi, 0) is not entirely In");
  }

  double eps = params.eps_start;
  ConeCertificate cert;
  for (int k = 0; k <= params.max_shrinks; ++k, eps *= params.shrink) {
    cert = cone_test(g, oracle, vertex, xi, eps, params, exec);
    cert.attempts = k + 1;
    if (cert.passed()) break;
  }
  return cert;
}

TransversalReport transversal_probe(const GroupSpec& g, const SetOracle& oracle, const Point& p, const Point& q,
                                    const std::vector<Point>& surface_samples, int segment_samples) {
  const Point step = mul(g, inverse(g, p), q);
  if (step.t().size() > 0 && step.t().norm() > 1e-10) {
    throw Error(ErrorCode::NotAligned, "points are not horizontally aligned");
  }
  TransversalReport report;
  for (const Point& s : surface_samples) report.surface_in = report.surface_in && oracle.contains(s);
  if (step.z().norm() == 0.0) return report;
  for (int i = 1; i <= segment_samples; ++i) {
    const double s = static_cast<double>(i) / (segment_samples + 1);
    const Point x = exp_horizontal(g, p, s * step.z());
    ++report.samples;
    if (oracle.contains(x)) {
      ++report.in_count;
    } else {
      if (report.out_count == 0) report.first_out = x;
      ++report.out_count;
    }
  }
  return report;
}

}  // namespace carnot
