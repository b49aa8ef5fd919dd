#include "carnot/group.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/SVD>

#include "carnot/error.hpp"
#include "carnot/random.hpp"

namespace carnot {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonSkew: return "NonSkew";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::HormanderFails: return "HormanderFails";
    case ErrorCode::BadP: return "BadP";
    case ErrorCode::HypothesisFails: return "HypothesisFails";
    case ErrorCode::NotAligned: return "NotAligned";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::BoundaryNotFound: return "BoundaryNotFound";
    case ErrorCode::FitDegenerate: return "FitDegenerate";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

GroupSpec make_group(int m, int ell, std::vector<Matrix> A, double skew_tol, std::string name) {
  if (m < 1 || ell < 0) {
    throw Error(ErrorCode::DimensionMismatch, "group needs m >= 1 and ell >= 0");
  }
  if (A.size() != static_cast<std::size_t>(ell)) {
    std::ostringstream msg;
    msg << "expected " << ell << " matrices, got " << A.size();
    throw Error(ErrorCode::DimensionMismatch, msg.str());
  }
  for (std::size_t beta = 0; beta < A.size(); ++beta) {
    const Matrix& a = A[beta];
    if (a.rows() != m || a.cols() != m) {
      std::ostringstream msg;
      msg << "matrix A[" << beta << "] is " << a.rows() << "x" << a.cols() << ", expected " << m
          << "x" << m;
      throw Error(ErrorCode::DimensionMismatch, msg.str());
    }
    if (!a.allFinite()) {
      std::ostringstream msg;
      msg << "matrix A[" << beta << "] has non-finite entries";
      throw Error(ErrorCode::NonFinite, msg.str());
    }
    const double asym = (a + a.transpose()).cwiseAbs().maxCoeff();
    if (asym > skew_tol) {
      std::ostringstream msg;
      msg << "matrix A[" << beta << "] is not skew-symmetric (max |A+A^T| = " << asym << ")";
      throw Error(ErrorCode::NonSkew, msg.str());
    }
  }
  return GroupSpec(m, ell, std::move(A), std::move(name));
}

GroupSpec heisenberg(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "heisenberg(n) needs n >= 1");
  Matrix a = Matrix::Zero(2 * n, 2 * n);
  for (int j = 0; j < n; ++j) {
    a(n + j, j) = 2.0;   // 2 y_j x'_j
    a(j, n + j) = -2.0;  // -2 x_j y'_j
  }
  return make_group(2 * n, 1, {a}, 0.0, "heisenberg" + std::to_string(n));
}

GroupSpec hr_product() {
  Matrix a = Matrix::Zero(3, 3);
  a(1, 0) = 2.0;
  a(0, 1) = -2.0;
  return make_group(3, 1, {a}, 0.0, "hxr");
}

GroupSpec free_step2(int m) {
  if (m < 2) throw Error(ErrorCode::InvalidArgument, "free_step2(m) needs m >= 2");
  std::vector<Matrix> A;
  for (int j = 0; j < m; ++j) {
    for (int k = j + 1; k < m; ++k) {
      Matrix a = Matrix::Zero(m, m);
      a(j, k) = 1.0;
      a(k, j) = -1.0;
      A.push_back(std::move(a));
    }
  }
  const int ell = m * (m - 1) / 2;
  return make_group(m, ell, std::move(A), 0.0, "free" + std::to_string(m));
}

GroupSpec abelian(int m, int ell) {
  std::vector<Matrix> A(static_cast<std::size_t>(ell), Matrix::Zero(m, m));
  return make_group(m, ell, std::move(A), 0.0, "abelian");
}

Point::Point(Vector z, Vector t) : z_(std::move(z)), t_(std::move(t)) {
  if (!z_.allFinite() || !t_.allFinite()) {
    throw Error(ErrorCode::NonFinite, "point has non-finite coordinates");
  }
}

Point Point::identity(const GroupSpec& g) { return Point(Vector::Zero(g.m()), Vector::Zero(g.ell())); }

Point Point::horizontal(const GroupSpec& g, const Vector& u) {
  if (u.size() != g.m()) throw Error(ErrorCode::DimensionMismatch, "horizontal vector has wrong size");
  return Point(u, Vector::Zero(g.ell()));
}

Point Point::from_coords(const GroupSpec& g, const Vector& coords) {
  if (coords.size() != g.dim()) throw Error(ErrorCode::DimensionMismatch, "coordinate vector has wrong size");
  return Point(coords.head(g.m()), coords.tail(g.ell()));
}

Vector Point::coords() const {
  Vector c(z_.size() + t_.size());
  c << z_, t_;
  return c;
}

HorizontalLine::HorizontalLine(Point base_, Vector dir_) : base(std::move(base_)), dir(std::move(dir_)) {
  if (!(dir.norm() > 0.0)) throw Error(ErrorCode::InvalidArgument, "line direction must be nonzero");
}

void check_point(const GroupSpec& g, const Point& p) {
  if (p.z().size() != g.m() || p.t().size() != g.ell()) {
    throw Error(ErrorCode::DimensionMismatch, "point does not belong to the group's dimensions");
  }
}

Vector q_form(const GroupSpec& g, const Vector& z, const Vector& zeta) {
  if (z.size() != g.m() || zeta.size() != g.m()) {
    throw Error(ErrorCode::DimensionMismatch, "q_form arguments must lie in R^m");
  }
  Vector q(g.ell());
  for (int beta = 0; beta < g.ell(); ++beta) q[beta] = z.dot(g.A(beta) * zeta);
  return q;
}

Point mul(const GroupSpec& g, const Point& p, const Point& q) {
  check_point(g, p);
  check_point(g, q);
  return Point(p.z() + q.z(), p.t() + q.t() + q_form(g, p.z(), q.z()));
}

Point inverse(const GroupSpec& g, const Point& p) {
  check_point(g, p);
  return Point(-p.z(), -p.t());
}

Point dilate(const GroupSpec& g, double lambda, const Point& p) {
  check_point(g, p);
  return Point(lambda * p.z(), (lambda * lambda) * p.t());
}

Point exp_horizontal(const GroupSpec& g, const Point& p, const Vector& u) {
  check_point(g, p);
  return Point(p.z() + u, p.t() + q_form(g, p.z(), u));
}

Point line_point(const GroupSpec& g, const HorizontalLine& line, double s) {
  return exp_horizontal(g, line.base, s * line.dir);
}

double quasi_norm(const GroupSpec& g, const Point& p) {
  check_point(g, p);
  return std::max(p.z().norm(), std::sqrt(p.t().norm()));
}

double quasi_dist(const GroupSpec& g, const Point& p, const Point& q) {
  return quasi_norm(g, mul(g, inverse(g, p), q));
}

Matrix structure_matrix(const GroupSpec& g) {
  const int m = g.m();
  Matrix S(g.ell(), m * (m - 1) / 2);
  int col = 0;
  for (int j = 0; j < m; ++j) {
    for (int k = j + 1; k < m; ++k, ++col) {
      for (int beta = 0; beta < g.ell(); ++beta) S(beta, col) = g.A(beta)(j, k);
    }
  }
  return S;
}

int numerical_rank(const Matrix& M, double rel_threshold) {
  if (M.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(M);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv[0] == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv[i] > rel_threshold * sv[0]) ++rank;
  }
  return rank;
}

HormanderResult hormander_check(const GroupSpec& g) {
  const int rank = numerical_rank(structure_matrix(g));
  return {rank == g.ell(), rank};
}

Matrix q_map(const GroupSpec& g, const Vector& z) {
  Matrix M(g.ell(), g.m());
  for (int beta = 0; beta < g.ell(); ++beta) M.row(beta) = (g.A(beta).transpose() * z).transpose();
  return M;
}

std::string to_string(MetivierKind kind) {
  switch (kind) {
    case MetivierKind::Metivier: return "Metivier";
    case MetivierKind::NotMetivier: return "NotMetivier";
    case MetivierKind::Inconclusive: return "Inconclusive";
  }
  return "Unknown";
}

namespace {

// Ratio sigma_ell / sigma_1 of q_map(z); 0 when fewer than ell singular values.
double surjectivity_margin(const GroupSpec& g, const Vector& z) {
  Eigen::JacobiSVD<Matrix> svd(q_map(g, z));
  const auto& sv = svd.singularValues();
  if (sv.size() < g.ell() || sv[0] == 0.0) return 0.0;
  return sv[g.ell() - 1] / sv[0];
}

}  // namespace

MetivierVerdict metivier_probe(const GroupSpec& g, int n_samples, std::uint64_t seed) {
  if (n_samples < 1) throw Error(ErrorCode::InvalidArgument, "metivier_probe needs n_samples >= 1");
  const int m = g.m();
  if (g.ell() == 0) return {MetivierKind::Metivier, std::nullopt, 0};
  // q_map(z) z = 0, so its rank is at most m - 1.
  if (g.ell() > m - 1) {
    return {MetivierKind::NotMetivier, Vector(Vector::Unit(m, 0)), 0};
  }
  constexpr double kRankThreshold = 1e-10;
  constexpr double kAmbiguous = 1e-7;
  bool ambiguous = false;
  int used = 0;
  auto probe = [&](const Vector& z) -> bool {
    ++used;
    const double margin = surjectivity_margin(g, z);
    if (margin <= kRankThreshold) return true;
    if (margin < kAmbiguous) ambiguous = true;
    return false;
  };
  for (int i = 0; i < m; ++i) {
    const Vector e = Vector::Unit(m, i);
    if (probe(e)) return {MetivierKind::NotMetivier, e, used};
  }
  for (int i = 0; i < n_samples; ++i) {
    RandomStream rng(seed, static_cast<std::uint64_t>(i));
    const Vector z = rng.unit_vector(m);
    if (probe(z)) return {MetivierKind::NotMetivier, z, used};
  }
  return {ambiguous ? MetivierKind::Inconclusive : MetivierKind::Metivier, std::nullopt, used};
}

}  // namespace carnot
