#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace carnot {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// A step-two Carnot group R^m x R^ell with law
///   (z, t) . (zeta, tau) = (z + zeta, t + tau + Q(z, zeta)),
/// where Q(z, zeta)_beta = z^T A^beta zeta and every A^beta is skew.
class GroupSpec {
 public:
  int m() const { return m_; }
  int ell() const { return ell_; }
  int dim() const { return m_ + ell_; }
  const std::vector<Matrix>& A() const { return A_; }
  const Matrix& A(int beta) const { return A_[static_cast<std::size_t>(beta)]; }
  const std::string& name() const { return name_; }

 private:
  friend GroupSpec make_group(int, int, std::vector<Matrix>, double, std::string);
  GroupSpec(int m, int ell, std::vector<Matrix> A, std::string name)
      : m_(m), ell_(ell), A_(std::move(A)), name_(std::move(name)) {}

  int m_;
  int ell_;
  std::vector<Matrix> A_;
  std::string name_;
};

/// Validates dimensions and skewness. `skew_tol` bounds |A + A^T| entrywise:
/// 0 for groups built in code, 1e-12 for groups read from files.
GroupSpec make_group(int m, int ell, std::vector<Matrix> A, double skew_tol = 0.0,
                     std::string name = "custom");

/// H^n with coordinates (x_1..x_n, y_1..y_n; t) and Q = 2 sum_j (y_j x'_j - x_j y'_j).
GroupSpec heisenberg(int n);
/// H x R with horizontal coordinates (x, y, u) and Q = 2 (y x' - y' x).
GroupSpec hr_product();
/// Free step-two group on m generators: ell = m(m-1)/2, Q(e_j, e_k) = e_{jk}.
GroupSpec free_step2(int m);
/// R^m x R^ell with Q = 0.
GroupSpec abelian(int m, int ell);

/// Group element (z, t). Entries must be finite.
class Point {
 public:
  Point() = default;
  Point(Vector z, Vector t);

  static Point identity(const GroupSpec& g);
  static Point horizontal(const GroupSpec& g, const Vector& u);
  /// Splits a stacked coordinate vector (z..., t...).
  static Point from_coords(const GroupSpec& g, const Vector& coords);

  const Vector& z() const { return z_; }
  const Vector& t() const { return t_; }
  Vector coords() const;

 private:
  Vector z_;
  Vector t_;
};

struct HorizontalLine {
  HorizontalLine(Point base, Vector dir);

  Point base;
  Vector dir;
};

void check_point(const GroupSpec& g, const Point& p);

Vector q_form(const GroupSpec& g, const Vector& z, const Vector& zeta);
Point mul(const GroupSpec& g, const Point& p, const Point& q);
Point inverse(const GroupSpec& g, const Point& p);
Point dilate(const GroupSpec& g, double lambda, const Point& p);
/// e^{u.X}(P) = P . (u, 0).
Point exp_horizontal(const GroupSpec& g, const Point& p, const Vector& u);
Point line_point(const GroupSpec& g, const HorizontalLine& line, double s);

/// Homogeneous gauge max(|z|, |t|^{1/2}).
double quasi_norm(const GroupSpec& g, const Point& p);
double quasi_dist(const GroupSpec& g, const Point& p, const Point& q);

/// ell x m(m-1)/2 matrix whose columns are Q(e_j, e_k), j < k (lexicographic).
Matrix structure_matrix(const GroupSpec& g);

/// Numerical rank with threshold 1e-10 times the largest singular value.
int numerical_rank(const Matrix& M, double rel_threshold = 1e-10);

struct HormanderResult {
  bool holds;
  int rank;
};
HormanderResult hormander_check(const GroupSpec& g);

/// ell x m matrix with rows (A^beta z)^T; the map zeta -> Q(z, zeta).
Matrix q_map(const GroupSpec& g, const Vector& z);

enum class MetivierKind { Metivier, NotMetivier, Inconclusive };

struct MetivierVerdict {
  MetivierKind kind;
  std::optional<Vector> witness;
  int samples;
};

std::string to_string(MetivierKind kind);

/// Randomized Metivier probe. Tests every basis direction, then n_samples
/// random unit directions, for rank(q_map(z)) = ell. A Metivier verdict is
/// probabilistic. Inconclusive means some probe had its smallest relevant
/// singular value within [1e-10, 1e-7] of the largest.
MetivierVerdict metivier_probe(const GroupSpec& g, int n_samples, std::uint64_t seed);

}  // namespace carnot
