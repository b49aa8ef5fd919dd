#include "carnot/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <Eigen/SVD>

#include "carnot/error.hpp"
#include "carnot/graph.hpp"
#include "carnot/random.hpp"

namespace carnot {

std::string to_string(BoundaryCase c) {
  switch (c) {
    case BoundaryCase::HorizontalPlane: return "HorizontalPlane";
    case BoundaryCase::UGraph: return "UGraph";
    case BoundaryCase::XYGraph: return "XYGraph";
  }
  return "Unknown";
}

std::optional<double> bisect_line(const SetOracle& oracle, const std::function<Point(double)>& line, double tol,
                                  double max_bracket) {
  const bool v0 = oracle.contains(line(0.0));
  double inner = 0.0;
  for (double L = 1.0; L <= max_bracket; L *= 2.0) {
    for (const double sign : {1.0, -1.0}) {
      if (oracle.contains(line(sign * L)) == v0) continue;
      // verdict at sign * inner equals v0 (checked on the previous round)
      double a = sign * inner, b = sign * L;
      while (std::abs(b - a) > tol) {
        const double mid = 0.5 * (a + b);
        if (oracle.contains(line(mid)) == v0) a = mid;
        else b = mid;
      }
      return 0.5 * (a + b);
    }
    inner = L;
  }
  return std::nullopt;
}

bool probably_interior(const GroupSpec& g, const SetOracle& oracle, const Point& p, double radius, int samples,
                       std::uint64_t seed, std::uint64_t stream) {
  if (!oracle.contains(p)) return false;
  RandomStream rng(seed, stream);
  const Vector c = p.coords();
  const Vector lo = c.array() - radius, hi = c.array() + radius;
  for (int k = 0; k < samples; ++k) {
    if (!oracle.contains(Point::from_coords(g, rng.uniform_box(lo, hi)))) return false;
  }
  return true;
}

namespace {

constexpr std::uint64_t kInteriorStream = 1ull << 44;

using LineFamily = std::function<std::function<Point(double)>(const Vector&)>;

/// Boundary points (stacked coordinates) of the lines indexed by a cube grid.
std::vector<Vector> boundary_points(const SetOracle& oracle, const LineFamily& family, int n, double half,
                                    const ClassifyParams& params, Execution exec) {
  const std::size_t total = static_cast<std::size_t>(n) * n * n;
  std::vector<std::optional<Vector>> found(total);
  for_each_index(total, exec, [&](std::size_t idx) {
    const int i = static_cast<int>(idx % n), j = static_cast<int>((idx / n) % n), k = static_cast<int>(idx / n / n);
    const auto node = [&](int a) { return n == 1 ? 0.0 : -half + 2.0 * half * a / (n - 1); };
    Vector w(3);
    w << node(i), node(j), node(k);
    const auto line = family(w);
    if (auto s = bisect_line(oracle, line, params.bracket_tol, params.max_bracket)) found[idx] = line(*s).coords();
  });
  std::vector<Vector> pts;
  pts.reserve(total);
  for (auto& f : found) {
    if (f) pts.push_back(std::move(*f));
  }
  return pts;
}

struct PlaneFit {
  Vector normal;
  double offset;
};

PlaneFit fit_plane(const std::vector<Vector>& pts) {
  if (pts.size() < 4) throw Error(ErrorCode::FitDegenerate, "fewer than 4 boundary points located");
  const Eigen::Index d = pts.front().size();
  Vector centroid = Vector::Zero(d);
  for (const Vector& p : pts) centroid += p;
  centroid /= static_cast<double>(pts.size());
  Matrix M(static_cast<Eigen::Index>(pts.size()), d);
  for (std::size_t i = 0; i < pts.size(); ++i) M.row(static_cast<Eigen::Index>(i)) = (pts[i] - centroid).transpose();
  Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeThinV);
  const Vector& sv = svd.singularValues();
  if (sv[0] == 0.0 || sv[d - 2] <= 1e-8 * sv[0]) {
    throw Error(ErrorCode::FitDegenerate, "boundary samples do not span a hyperplane");
  }
  Vector n = svd.matrixV().col(d - 1);
  return {n, n.dot(centroid)};
}

double max_distance(const PlaneFit& fit, const std::vector<Vector>& pts) {
  double worst = 0.0;
  for (const Vector& p : pts) worst = std::max(worst, std::abs(fit.normal.dot(p) - fit.offset));
  return worst / fit.normal.norm();
}

}  // namespace

ClassificationResult classify_boundary(const GroupSpec& g, const SetOracle& oracle, const Point& seed_point,
                                       const ClassifyParams& params, Execution exec) {
  if (g.m() != 3 || g.ell() != 1) {
    throw Error(ErrorCode::DimensionMismatch, "classify_boundary needs a group of dimensions (3, 1)");
  }
  check_point(g, seed_point);
  if (params.grid_n < 2 || params.half <= 0.0 || params.bracket_tol <= 0.0) {
    throw Error(ErrorCode::InvalidArgument, "grid_n >= 2, half > 0 and bracket_tol > 0 required");
  }

  // Boundary point near the seed: horizontal axes first, then the vertical axis.
  std::optional<Point> B;
  for (int axis = 0; axis < 4 && !B; ++axis) {
    std::function<Point(double)> line;
    if (axis < 3) {
      line = [&, axis](double s) { return exp_horizontal(g, seed_point, s * Vector::Unit(3, axis)); };
    } else {
      line = [&](double s) { return Point(seed_point.z(), seed_point.t() + Vector::Constant(1, s)); };
    }
    if (auto s = bisect_line(oracle, line, params.bracket_tol, params.max_bracket)) B = line(*s);
  }
  if (!B) throw Error(ErrorCode::BoundaryNotFound, "no verdict change along any probe line through the seed");

  const SetOracle local = oracle.translated(g, *B);
  const SetOracle local_c = local.complement();
  const Point up = Point::from_coords(g, Vector::Unit(4, 2));
  std::uint64_t stream = kInteriorStream;
  const auto interior = [&](const SetOracle& o, const Point& p) {
    return probably_interior(g, o, p, params.interior_radius, params.interior_samples, params.seed, stream++);
  };

  // Horizontal probe direction: center of the longest circular run of
  // directions (cos, sin, 0, 0) lying in Int(o).
  const auto xy_direction = [&](const SetOracle& o) -> std::optional<Vector> {
    const int nd = std::max(params.directions, 1);
    std::vector<char> hit(static_cast<std::size_t>(nd));
    for (int k = 0; k < nd; ++k) {
      const double th = 2.0 * std::numbers::pi * k / nd;
      hit[k] = interior(o, Point::from_coords(g, (Vector(4) << std::cos(th), std::sin(th), 0, 0).finished()));
    }
    int best_len = 0, best_start = 0;
    if (std::count(hit.begin(), hit.end(), 1) == nd) {
      best_len = nd;
    } else {
      for (int start = 0; start < nd; ++start) {
        if (!hit[start] || hit[(start + nd - 1) % nd]) continue;
        int len = 0;
        while (hit[(start + len) % nd]) ++len;
        if (len > best_len) best_len = len, best_start = start;
      }
    }
    if (best_len == 0) return std::nullopt;
    const double th = 2.0 * std::numbers::pi * (best_start + 0.5 * (best_len - 1)) / nd;
    return (Vector(3) << std::cos(th), std::sin(th), 0.0).finished();
  };

  ClassificationResult result;
  result.boundary_point = *B;
  std::optional<Vector> xi;
  if (interior(local, up)) {
    result.boundary_case = BoundaryCase::UGraph;
  } else if ((xi = xy_direction(local))) {
    result.boundary_case = BoundaryCase::XYGraph;
  } else if (interior(local_c, up)) {
    result.boundary_case = BoundaryCase::UGraph;
  } else if ((xi = xy_direction(local_c))) {
    result.boundary_case = BoundaryCase::XYGraph;
  } else {
    result.boundary_case = BoundaryCase::HorizontalPlane;
  }
  result.direction = xi;

  // Line families in original coordinates, indexed by the grid coordinates w.
  const Point b0 = *B;
  LineFamily family;
  switch (result.boundary_case) {
    case BoundaryCase::UGraph:
      family = [&g, b0](const Vector& w) {
        const Point base = mul(g, b0, Point::from_coords(g, (Vector(4) << w[0], w[1], 0.0, w[2]).finished()));
        return std::function<Point(double)>(
            [&g, base](double s) { return exp_horizontal(g, base, s * Vector::Unit(3, 2)); });
      };
      break;
    case BoundaryCase::XYGraph: {
      const Matrix basis = orthogonal_complement(*xi);
      const Vector dir = *xi;
      family = [&g, b0, basis, dir](const Vector& w) {
        const Point base = mul(g, b0, Point(basis * w.head(2), w.tail(1)));
        return std::function<Point(double)>([&g, base, dir](double s) { return exp_horizontal(g, base, s * dir); });
      };
      break;
    }
    case BoundaryCase::HorizontalPlane:
      family = [&g, b0](const Vector& w) {
        const Point base = mul(g, b0, Point::horizontal(g, w));
        return std::function<Point(double)>(
            [base](double s) { return Point(base.z(), base.t() + Vector::Constant(1, s)); });
      };
      break;
  }

  const std::vector<Vector> pts = boundary_points(oracle, family, params.grid_n, params.half, params, exec);
  if (pts.empty()) throw Error(ErrorCode::BoundaryNotFound, "no boundary crossing on the fit grid");
  PlaneFit fit = fit_plane(pts);
  result.samples = static_cast<int>(pts.size());
  result.residual = max_distance(fit, pts);

  // Orient so that the set is n . X > offset: B pushed along the unit normal.
  const double h = std::max(1e3 * params.bracket_tol, 1e-6);
  const Vector probe = B->coords() + h * fit.normal.normalized();
  const bool plus_in = oracle.contains(Point::from_coords(g, probe));
  if (!plus_in) {
    fit.normal = -fit.normal;
    fit.offset = -fit.offset;
  }

  const std::vector<Vector> far =
      boundary_points(oracle, family, params.verify_n, params.verify_scale * params.half, params, exec);
  result.global_residual = far.empty() ? std::numeric_limits<double>::infinity() : max_distance(fit, far);
  result.verified = !far.empty() && result.global_residual <= params.verify_tol;

  const Vector& n = fit.normal;
  const double nmax = n.cwiseAbs().maxCoeff();
  double scale = 1.0;
  switch (result.boundary_case) {
    case BoundaryCase::HorizontalPlane: scale = std::abs(n[3]); break;
    case BoundaryCase::UGraph: scale = std::abs(n[2]); break;
    case BoundaryCase::XYGraph: scale = std::abs(n[0]) > 1e-9 * nmax ? std::abs(n[0]) : std::abs(n[1]); break;
  }
  if (scale <= 1e-9 * nmax) {
    throw Error(ErrorCode::FitDegenerate, "fitted plane is incompatible with the selected branch");
  }
  result.normal = n / scale;
  result.offset = fit.offset / scale;
  if (result.boundary_case == BoundaryCase::UGraph) {
    // u = (offset - n_x x - n_y y - n_t t) / n_u
    const double nu = result.normal[2];
    result.coefficients = (Vector(4) << -result.normal[0] / nu, -result.normal[1] / nu, -result.normal[3] / nu,
                           result.offset / nu)
                              .finished();
  } else {
    result.coefficients = Vector(5);
    result.coefficients << result.normal, result.offset;
  }
  return result;
}

}  // namespace carnot
