#include "carnot/monotone.hpp"

#include <algorithm>
#include <cmath>

#include "carnot/error.hpp"
#include "carnot/random.hpp"

namespace carnot {

namespace {

struct PairOutcome {
  bool tested = false;
  int violations = 0;
  std::optional<SegmentWitness> witness;
};

double default_step(const GroupSpec& g, const Box& box) {
  double w = 0.0;
  for (int i = 0; i < g.m(); ++i) w = std::max(w, 0.5 * (box.hi[i] - box.lo[i]));
  return w;
}

ConvexityReport convexity_kernel(const GroupSpec& g, const SetOracle& oracle, const ConvexityParams& params,
                                 std::uint64_t stream_offset, Execution exec) {
  if (params.box.dim() != g.dim()) throw Error(ErrorCode::DimensionMismatch, "sampling box must cover (z, t)");
  if (!params.box.lo.allFinite() || !params.box.hi.allFinite()) {
    throw Error(ErrorCode::InvalidArgument, "sampling box must be finite");
  }
  if (params.n_pairs < 1 || params.line_samples < 1) throw Error(ErrorCode::InvalidArgument, "counts must be >= 1");
  const double step = params.step > 0.0 ? params.step : default_step(g, params.box);
  const Vector ulo = Vector::Constant(g.m(), -step), uhi = Vector::Constant(g.m(), step);

  std::vector<PairOutcome> outcomes(static_cast<std::size_t>(params.n_pairs));
  for_each_index(outcomes.size(), exec, [&](std::size_t i) {
    RandomStream rng(params.seed, stream_offset + i);
    std::optional<Point> p;
    for (int a = 0; a < params.point_attempts && !p; ++a) {
      Point cand = Point::from_coords(g, rng.uniform_box(params.box.lo, params.box.hi));
      if (oracle.contains(cand)) p = std::move(cand);
    }
    if (!p) return;
    const Vector u = rng.uniform_box(ulo, uhi);
    const Point q = exp_horizontal(g, *p, u);
    if (!oracle.contains(q)) return;
    PairOutcome& out = outcomes[i];
    out.tested = true;
    for (int k = 0; k < params.line_samples; ++k) {
      const double s = rng.uniform();
      if (s == 0.0) continue;
      Point x = exp_horizontal(g, *p, s * u);
      if (!oracle.contains(x)) {
        if (!out.witness) out.witness = SegmentWitness{*p, q, s, std::move(x)};
        ++out.violations;
      }
    }
  });

  ConvexityReport report;
  for (PairOutcome& o : outcomes) {
    if (!o.tested) continue;
    ++report.pairs_tested;
    report.violations += o.violations;
    if (o.witness && static_cast<int>(report.witnesses.size()) < params.max_witnesses) {
      report.witnesses.push_back(std::move(*o.witness));
    }
  }
  return report;
}

}  // namespace

ConvexityReport hconvex_check(const GroupSpec& g, const SetOracle& oracle, const ConvexityParams& params,
                              Execution exec) {
  return convexity_kernel(g, oracle, params, 0, exec);
}

std::string to_string(MonotoneVerdict v) {
  switch (v) {
    case MonotoneVerdict::Monotone: return "Monotone";
    case MonotoneVerdict::NotConvex: return "NotConvex";
    case MonotoneVerdict::ComplementNotConvex: return "ComplementNotConvex";
    case MonotoneVerdict::Both: return "Both";
  }
  return "Unknown";
}

MonotonicityReport monotone_check(const GroupSpec& g, const SetOracle& oracle, const ConvexityParams& params,
                                  Execution exec) {
  MonotonicityReport report;
  report.set = convexity_kernel(g, oracle, params, 0, exec);
  report.complement = convexity_kernel(g, oracle.complement(), params, 1ull << 48, exec);
  report.pairs_tested = report.set.pairs_tested + report.complement.pairs_tested;
  const bool a = report.set.passed();
  const bool b = report.complement.passed();
  report.verdict = a && b   ? MonotoneVerdict::Monotone
                   : !a && b ? MonotoneVerdict::NotConvex
                   : a && !b ? MonotoneVerdict::ComplementNotConvex
                             : MonotoneVerdict::Both;
  return report;
}

MidpointWitness euclidean_midpoint_witness(const GroupSpec& g, const SetOracle& oracle, const Point& p,
                                           const Point& q) {
  check_point(g, p);
  check_point(g, q);
  Point mid = Point::from_coords(g, 0.5 * (p.coords() + q.coords()));
  const bool ends = oracle.contains(p) && oracle.contains(q);
  const bool inside = oracle.contains(mid);
  return {p, q, std::move(mid), ends, inside};
}

AffineReport haffine_check(const GroupSpec& g, const std::function<double(const Point&)>& psi, int n_samples,
                           const Box& box, std::uint64_t seed, double rel_tol, Execution exec) {
  if (n_samples < 1) throw Error(ErrorCode::InvalidArgument, "n_samples must be >= 1");
  if (box.dim() != g.dim()) throw Error(ErrorCode::DimensionMismatch, "sampling box must cover (z, t)");
  const double step = default_step(g, box);
  const Vector ulo = Vector::Constant(g.m(), -step), uhi = Vector::Constant(g.m(), step);

  std::vector<std::optional<AffineWitness>> failures(static_cast<std::size_t>(n_samples));
  for_each_index(failures.size(), exec, [&](std::size_t i) {
    RandomStream rng(seed, i);
    const Point base = Point::from_coords(g, rng.uniform_box(box.lo, box.hi));
    const Vector zeta = rng.uniform_box(ulo, uhi);
    const double lambda = rng.uniform(-2.0, 2.0);
    const double f0 = psi(base);
    const double f1 = psi(exp_horizontal(g, base, zeta));
    const double fl = psi(exp_horizontal(g, base, lambda * zeta));
    const double lhs = fl - f0;
    const double rhs = lambda * (f1 - f0);
    const double scale = 1.0 + std::abs(f0) + std::abs(f1) + std::abs(fl);
    if (!(std::abs(lhs - rhs) <= rel_tol * scale)) failures[i] = AffineWitness{base, zeta, lambda, lhs, rhs};
  });

  AffineReport report;
  report.samples = n_samples;
  for (auto& f : failures) {
    if (f) {
      report.affine_along_lines = false;
      report.witness = std::move(*f);
      break;
    }
  }
  return report;
}

bool near_boundary(const GroupSpec& g, const SetOracle& oracle, const Point& p, double delta) {
  const bool here = oracle.contains(p);
  const Vector c = p.coords();
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    for (const double sign : {-1.0, 1.0}) {
      Vector d = c;
      d[i] += sign * delta;
      if (oracle.contains(Point::from_coords(g, d)) != here) return true;
    }
  }
  return false;
}

BoundaryLineReport line_in_boundary_probe(const GroupSpec& g, const SetOracle& oracle, const Point& p,
                                          const Point& q, const BoundaryLineParams& params) {
  const Point step = mul(g, inverse(g, p), q);
  if (step.t().size() > 0 && step.t().norm() > 1e-10) {
    throw Error(ErrorCode::NotAligned, "points are not horizontally aligned");
  }
  BoundaryLineReport report;
  report.endpoints_on_boundary = near_boundary(g, oracle, p, params.boundary_width) &&
                                 near_boundary(g, oracle, q, params.boundary_width);
  if (step.z().norm() == 0.0 || params.samples < 1) return report;
  const double lo = -params.extent;
  const double span = 1.0 + 2.0 * params.extent;
  for (int k = 0; k < params.samples; ++k) {
    const double s = params.samples == 1 ? 0.5 : lo + span * k / (params.samples - 1);
    const Point x = exp_horizontal(g, p, s * step.z());
    ++report.samples;
    if (near_boundary(g, oracle, x, params.boundary_width)) ++report.near_boundary;
  }
  report.fraction = static_cast<double>(report.near_boundary) / report.samples;
  return report;
}

int boundary_interior_probe(const GroupSpec& g, const SetOracle& oracle, const Box& box, int n_boxes, double radius,
                            int samples_per_box, double delta, std::uint64_t seed, Execution exec) {
  if (box.dim() != g.dim()) throw Error(ErrorCode::DimensionMismatch, "sampling box must cover (z, t)");
  std::vector<char> all_boundary(static_cast<std::size_t>(std::max(n_boxes, 0)), 0);
  for_each_index(all_boundary.size(), exec, [&](std::size_t i) {
    RandomStream rng(seed, i);
    const Vector center = rng.uniform_box(box.lo, box.hi);
    const Vector lo = center.array() - radius, hi = center.array() + radius;
    bool every = true;
    for (int k = 0; k < samples_per_box && every; ++k) {
      every = near_boundary(g, oracle, Point::from_coords(g, rng.uniform_box(lo, hi)), delta);
    }
    all_boundary[i] = every ? 1 : 0;
  });
  return static_cast<int>(std::count(all_boundary.begin(), all_boundary.end(), 1));
}

}  // namespace carnot
