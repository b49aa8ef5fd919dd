#include "carnot/multiexp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "carnot/error.hpp"
#include "carnot/random.hpp"

namespace carnot {

namespace {

void check_horizontal(const GroupSpec& g, std::span<const Vector> u) {
  for (const Vector& v : u) {
    if (v.size() != g.m()) throw Error(ErrorCode::DimensionMismatch, "horizontal vector has wrong size");
  }
}

std::vector<Vector> combine(const Matrix& coeffs, std::span<const Vector> in, int m) {
  std::vector<Vector> out(static_cast<std::size_t>(coeffs.rows()), Vector::Zero(m));
  for (Eigen::Index i = 0; i < coeffs.rows(); ++i) {
    for (Eigen::Index j = 0; j < coeffs.cols(); ++j) {
      if (coeffs(i, j) != 0.0) out[static_cast<std::size_t>(i)] += coeffs(i, j) * in[static_cast<std::size_t>(j)];
    }
  }
  return out;
}

}  // namespace

Point gamma(const GroupSpec& g, std::span<const Vector> u) {
  check_horizontal(g, u);
  Vector prefix = Vector::Zero(g.m());
  Vector t = Vector::Zero(g.ell());
  for (const Vector& v : u) {
    t += q_form(g, prefix, v);
    prefix += v;
  }
  return Point(std::move(prefix), std::move(t));
}

Point gamma_at(const GroupSpec& g, const Point& base, std::span<const Vector> u) {
  return mul(g, base, gamma(g, u));
}

Vector p_form(const GroupSpec& g, std::span<const Vector> u) {
  check_horizontal(g, u);
  const auto q = static_cast<long>(u.size());
  Vector out = Vector::Zero(g.ell());
  if (q < 3) return out;
  // sum_k Q(sum_{j<k} (q - 2(k-j)) u_j, u_k), accumulated with running sums.
  Vector plain = Vector::Zero(g.m());     // sum_{j<k} u_j
  Vector weighted = Vector::Zero(g.m());  // sum_{j<k} j u_j
  for (long k = 1; k <= q; ++k) {
    const Vector& uk = u[static_cast<std::size_t>(k - 1)];
    if (k > 1) {
      const Vector left = static_cast<double>(q - 2 * k) * plain + 2.0 * weighted;
      out += q_form(g, left, uk);
    }
    plain += uk;
    weighted += static_cast<double>(k) * uk;
  }
  return out;
}

std::vector<Vector> RickTransform::apply_forward(std::span<const Vector> u) const {
  if (static_cast<int>(u.size()) != size()) throw Error(ErrorCode::DimensionMismatch, "rick transform size mismatch");
  const int m = u.empty() ? 0 : static_cast<int>(u[0].size());
  return combine(forward, u, m);
}

std::vector<Vector> RickTransform::apply_backward(std::span<const Vector> v) const {
  if (static_cast<int>(v.size()) != size()) throw Error(ErrorCode::DimensionMismatch, "rick transform size mismatch");
  const int m = v.empty() ? 0 : static_cast<int>(v[0].size());
  return combine(backward, v, m);
}

Matrix rick_level_matrix(int q) {
  if (q < 3 || q % 2 == 0) throw Error(ErrorCode::InvalidArgument, "reduction level needs odd q >= 3");
  Matrix L = Matrix::Identity(q, q);
  // Row q-1 (1-based): v_{q-1} = sum_{j<=q-1} (2j - q) u_j.
  L.row(q - 2).setZero();
  for (int j = 1; j <= q - 1; ++j) L(q - 2, j - 1) = 2.0 * j - q;
  // Row q: v_q = u_q - sum_{j<=q-2} (2 + 2j - q)/(q - 2) u_j.
  for (int j = 1; j <= q - 2; ++j) L(q - 1, j - 1) = -(2.0 + 2.0 * j - q) / (q - 2.0);
  return L;
}

RickTransform rick_transform(int ell) {
  if (ell < 1) throw Error(ErrorCode::InvalidArgument, "rick_transform needs ell >= 1");
  const int q = 2 * ell + 1;
  // Each level only rewrites rows q'-1 and q' in terms of the original
  // u_1..u_{q'}, so the composite is assembled row block by row block.
  Matrix F = Matrix::Identity(q, q);
  for (int level = q; level >= 3; level -= 2) {
    const Matrix L = rick_level_matrix(level);
    F.row(level - 2).setZero();
    F.row(level - 1).setZero();
    F.block(level - 2, 0, 2, level) = L.block(level - 2, 0, 2, level);
  }
  // F is lower triangular with nonzero diagonal (1, ..., q'-2, 1, ...).
  Matrix B = F.triangularView<Eigen::Lower>().solve(Matrix::Identity(q, q));
  return {ell, std::move(F), std::move(B)};
}

std::size_t PairDecomposition::nonzero_pairs() const {
  return static_cast<std::size_t>(std::count_if(z.begin(), z.end(), [](const Vector& v) { return v.squaredNorm() > 0.0; }));
}

PairDecomposer::PairDecomposer(const GroupSpec& g) : g_(g) {
  const Matrix S = structure_matrix(g);
  const HormanderResult h = hormander_check(g);
  if (!h.holds) {
    std::ostringstream msg;
    msg << "Hormander condition fails: structure matrix rank " << h.rank << " < ell = " << g.ell();
    throw Error(ErrorCode::HormanderFails, msg.str());
  }
  if (S.size() == 0) {
    pinv_ = Matrix::Zero(S.cols(), S.rows());
    return;
  }
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(S);
  cod.setThreshold(1e-10);
  pinv_ = cod.pseudoInverse();
}

PairDecomposition PairDecomposer::decompose(const Vector& target) const {
  const int m = g_.m();
  if (target.size() != g_.ell()) throw Error(ErrorCode::DimensionMismatch, "vertical target has wrong size");
  PairDecomposition out;
  out.z.assign(static_cast<std::size_t>(std::max(m - 1, 0)), Vector::Zero(m));
  out.zeta = out.z;
  if (g_.ell() == 0) return out;

  const Vector c = pinv_ * target;
  // Group the coefficients by second index: w_k = sum_{j<k} c_{jk} e_j.
  std::vector<Vector> w(static_cast<std::size_t>(m), Vector::Zero(m));
  int col = 0;
  for (int j = 0; j < m; ++j) {
    for (int k = j + 1; k < m; ++k, ++col) w[static_cast<std::size_t>(k)][j] += c[col];
  }
  Vector sum = Vector::Zero(g_.ell());
  double largest = 0.0;
  for (int k = 1; k < m; ++k) {
    const Vector& wk = w[static_cast<std::size_t>(k)];
    const double n = wk.norm();
    if (n == 0.0) continue;
    const double root = std::sqrt(n);
    Vector zk = wk / root;
    Vector zetak = root * Vector::Unit(m, k);
    sum += q_form(g_, zk, zetak);
    largest = std::max({largest, zk.norm(), zetak.norm()});
    out.z[static_cast<std::size_t>(k - 1)] = std::move(zk);
    out.zeta[static_cast<std::size_t>(k - 1)] = std::move(zetak);
  }
  out.residual = (sum - target).norm();
  const double tn = target.norm();
  out.scale = tn > 0.0 ? largest / std::sqrt(tn) : 0.0;
  return out;
}

PairDecomposition duetre_decompose(const GroupSpec& g, const Vector& target) {
  return PairDecomposer(g).decompose(target);
}

int default_p(const GroupSpec& g) { return 2 * g.m() + 2; }

namespace {

int validated_p(const GroupSpec& g, std::optional<int> p) {
  const int value = p.value_or(default_p(g));
  if (value < 6 || (value - 3) % 2 == 0) {
    std::ostringstream msg;
    msg << "p = " << value << " invalid: need p - 3 odd and >= 3";
    throw Error(ErrorCode::BadP, msg.str());
  }
  return value;
}

}  // namespace

GammaSolver::GammaSolver(const GroupSpec& g, std::optional<int> p)
    : g_(g), p_(validated_p(g, p)), decomposer_(g), rick_(rick_transform((p_ - 3 - 1) / 2)) {}

std::vector<Vector> GammaSolver::construct(const Point& target) const {
  check_point(g_, target);
  const int m = g_.m();
  const int p = p_;
  const int q = p - 3;
  const int pairs = rick_.ell;

  // (1) sum_{j<k<=q} (q - 2(k-j)) Q(u_j, u_k) = q t, i.e. P_q(u) = q t. In the
  // reduced variables this is sum_k (1/(2k+1)) Q(v_{2k}, v_{2k+1}) = t, so
  // each decomposition pair is scaled by sqrt(2k+1); v_1 = 0.
  const PairDecomposition pd = decomposer_.decompose(target.t());
  std::vector<Vector> v(static_cast<std::size_t>(q), Vector::Zero(m));
  int slot = 1;
  for (std::size_t i = 0; i < pd.size(); ++i) {
    if (pd.z[i].squaredNorm() == 0.0) continue;
    if (slot > pairs) {
      std::ostringstream msg;
      msg << "p = " << p << " provides " << pairs << " reduced pairs, decomposition needs "
          << pd.nonzero_pairs();
      throw Error(ErrorCode::BadP, msg.str());
    }
    const double w = std::sqrt(2.0 * slot + 1.0);
    v[static_cast<std::size_t>(2 * slot - 1)] = w * pd.z[i];
    v[static_cast<std::size_t>(2 * slot)] = w * pd.zeta[i];
    ++slot;
  }
  std::vector<Vector> u = rick_.apply_backward(v);
  u.reserve(static_cast<std::size_t>(p));

  // (2) u_{p-2} = sum_{j<=p-3} (p - 2j - 1)/(p - 3) u_j.
  Vector next = Vector::Zero(m);
  for (int j = 1; j <= p - 3; ++j) next += ((p - 2.0 * j - 1.0) / (p - 3.0)) * u[static_cast<std::size_t>(j - 1)];
  u.push_back(std::move(next));

  // (3) u_{p-1} = (p - 1) z / 2 - sum_{j<=p-2} (p - j) u_j.
  next = ((p - 1.0) / 2.0) * target.z();
  for (int j = 1; j <= p - 2; ++j) next -= static_cast<double>(p - j) * u[static_cast<std::size_t>(j - 1)];
  u.push_back(std::move(next));

  // (4) u_p = sum_{j<=p-1} (p - 2j + 1)/(p - 1) u_j.
  next = Vector::Zero(m);
  for (int j = 1; j <= p - 1; ++j) next += ((p - 2.0 * j + 1.0) / (p - 1.0)) * u[static_cast<std::size_t>(j - 1)];
  u.push_back(std::move(next));
  return u;
}

std::pair<double, double> gamma_residual(const GroupSpec& g, const Vector& xi, std::span<const Vector> u,
                                         const Point& target) {
  std::vector<Vector> shifted;
  shifted.reserve(u.size());
  for (const Vector& v : u) shifted.push_back(xi + v);
  const std::vector<Vector> base(u.size(), xi);
  const Point moved = gamma(g, shifted);
  const Point rest = gamma(g, base);
  const double rz = (moved.z() - rest.z() - target.z()).norm();
  const double rt = (moved.t() - rest.t() - target.t()).norm();
  return {rz, rt};
}

MultiExpSolution GammaSolver::solve(const Vector& xi, const Point& target) const {
  if (xi.size() != g_.m()) throw Error(ErrorCode::DimensionMismatch, "xi has wrong size");
  MultiExpSolution out;
  out.p = p_;
  out.u = construct(target);
  const auto [rz, rt] = gamma_residual(g_, xi, out.u, target);
  out.residual_z = rz;
  out.residual_t = rt;
  out.residual = std::hypot(rz, rt);
  for (const Vector& v : out.u) out.size += v.norm();
  const double gauge = target.z().norm() + std::sqrt(target.t().norm());
  out.bound_ratio = gauge > 0.0 ? out.size / gauge : 0.0;
  return out;
}

MultiExpSolution solve_gamma(const GroupSpec& g, const Vector& xi, const Point& target, std::optional<int> p) {
  return GammaSolver(g, p).solve(xi, target);
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw Error(ErrorCode::InvalidArgument, "slope fit needs >= 2 points");
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

namespace {

double stacked_norm(const std::vector<Vector>& u) {
  double s = 0.0;
  for (const Vector& v : u) s += v.squaredNorm();
  return std::sqrt(s);
}

double sum_of_norms(const std::vector<Vector>& u) {
  double s = 0.0;
  for (const Vector& v : u) s += v.norm();
  return s;
}

Point scaled_target(const GroupSpec& g, const Vector& dir, double scale) {
  return Point::from_coords(g, scale * dir);
}

}  // namespace

OpennessReport openness_probe(const GroupSpec& g, const Vector& xi, std::span<const double> radii, int n_dirs,
                              std::uint64_t seed, std::optional<int> p, Execution exec) {
  if (radii.empty() || n_dirs < 1) throw Error(ErrorCode::InvalidArgument, "openness probe needs radii and n_dirs >= 1");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0) || (i > 0 && !(radii[i] < radii[i - 1]))) {
      throw Error(ErrorCode::InvalidArgument, "radii must be positive and strictly decreasing");
    }
  }
  const GammaSolver solver(g, p);
  const auto nr = radii.size();
  const auto nd = static_cast<std::size_t>(n_dirs);

  std::vector<double> critical(nr * nd, 0.0);
  std::vector<OpennessSample> samples(nr * nd);
  for_each_index(nr * nd, exec, [&](std::size_t idx) {
    const double r = radii[idx / nd];
    RandomStream rng(seed, idx % nd);
    const Vector dir = rng.unit_vector(g.dim());
    auto size_at = [&](double c) { return stacked_norm(solver.construct(scaled_target(g, dir, c * r * r))); };
    // Largest c with |u(c r^2 dir)| <= r, by bracketing then bisection.
    double lo = 0.0;
    double hi = 1.0;
    while (size_at(hi) <= r && hi < 1e12) {
      lo = hi;
      hi *= 2.0;
    }
    for (int it = 0; it < 80 && hi - lo > 1e-13 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (size_at(mid) <= r ? lo : hi) = mid;
    }
    critical[idx] = lo;
  });

  OpennessReport report;
  report.c0 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < nr; ++i) {
    const double r = radii[i];
    double c0 = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < nd; ++j) c0 = std::min(c0, critical[i * nd + j]);
    OpennessRow row{r, 0.0, c0};
    for (std::size_t j = 0; j < nd; ++j) {
      RandomStream rng(seed, j);
      const Vector dir = rng.unit_vector(g.dim());
      const Point target = scaled_target(g, dir, c0 * r * r);
      const MultiExpSolution sol = solver.solve(xi, target);
      const double size = stacked_norm(sol.u);
      row.worst_size = std::max(row.worst_size, size);
      samples[i * nd + j] = {r, c0 * r * r, size, sol.residual};
    }
    report.c0 = std::min(report.c0, c0);
    report.rows.push_back(row);
  }
  report.samples = std::move(samples);

  // Exponents from pure-vertical and pure-horizontal targets of magnitude r^2.
  std::vector<double> magnitude(nr);
  std::vector<double> vertical(nr, 0.0);
  std::vector<double> horizontal(nr, 0.0);
  for (std::size_t i = 0; i < nr; ++i) magnitude[i] = radii[i] * radii[i];
  for (std::size_t j = 0; j < nd; ++j) {
    RandomStream rng(seed, (1ull << 32) + j);
    const Vector dz = rng.unit_vector(g.m());
    const Vector dt = g.ell() > 0 ? rng.unit_vector(g.ell()) : Vector();
    for (std::size_t i = 0; i < nr; ++i) {
      if (g.ell() > 0) {
        const Point tv(Vector::Zero(g.m()), magnitude[i] * dt);
        vertical[i] = std::max(vertical[i], sum_of_norms(solver.construct(tv)));
      }
      const Point th(magnitude[i] * dz, Vector::Zero(g.ell()));
      horizontal[i] = std::max(horizontal[i], sum_of_norms(solver.construct(th)));
    }
  }
  if (nr >= 2) {
    if (g.ell() > 0 && vertical[0] > 0.0) report.vertical_exponent = loglog_slope(magnitude, vertical);
    report.horizontal_exponent = loglog_slope(magnitude, horizontal);
  }
  return report;
}

}  // namespace carnot
