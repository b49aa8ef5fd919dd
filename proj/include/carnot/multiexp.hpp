#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "carnot/group.hpp"
#include "carnot/parallel.hpp"

namespace carnot {

/// Gamma(u_1..u_p) = e^{u_p.X} ... e^{u_1.X}(0) = (sum u_j, sum_{j<k} Q(u_j, u_k)).
Point gamma(const GroupSpec& g, std::span<const Vector> u);

/// Gamma based at an arbitrary point: base . Gamma(u).
Point gamma_at(const GroupSpec& g, const Point& base, std::span<const Vector> u);

/// P_q(u) = sum_{j<k} (q - 2(k - j)) Q(u_j, u_k), with q = u.size(). P_1 = P_2 = 0.
Vector p_form(const GroupSpec& g, std::span<const Vector> u);

/// Linear change of variables v = T u on Z^{2 ell + 1}, acting blockwise
/// (v_i = sum_j forward(i, j) u_j), under which
///   P_{2ell+1}(u) = sum_{k=1}^{ell} (2ell+1)/(2k+1) Q(v_{2k}, v_{2k+1}).
struct RickTransform {
  int ell;
  Matrix forward;
  Matrix backward;

  int size() const { return 2 * ell + 1; }
  std::vector<Vector> apply_forward(std::span<const Vector> u) const;
  std::vector<Vector> apply_backward(std::span<const Vector> v) const;
};

/// One reduction level for odd q: replaces (u_{q-1}, u_q) by
///   v_{q-1} = sum_{j<q} (2j - q) u_j,  v_q = u_q - sum_{j<q-1} (2 + 2j - q)/(q-2) u_j
/// and leaves u_1..u_{q-2} unchanged (q x q matrix).
Matrix rick_level_matrix(int q);

RickTransform rick_transform(int ell);

struct PairDecomposition {
  std::vector<Vector> z;     ///< first members z_k
  std::vector<Vector> zeta;  ///< second members zeta_k
  double residual = 0.0;     ///< |sum Q(z_k, zeta_k) - target|
  double scale = 0.0;        ///< max_k max(|z_k|, |zeta_k|) / |target|^{1/2}

  std::size_t size() const { return z.size(); }
  std::size_t nonzero_pairs() const;
};

/// Writes a vertical target as sum_{k=2}^{m} Q(z_k, zeta_k) with
/// |z_k| = |zeta_k| <= C |t|^{1/2}, using minimum-norm coefficients c_{jk} of
/// sum_{j<k} c_{jk} Q(e_j, e_k) = t.
class PairDecomposer {
 public:
  /// Throws HormanderFails if the structure matrix has rank < ell.
  explicit PairDecomposer(const GroupSpec& g);

  PairDecomposition decompose(const Vector& target) const;
  const Matrix& pseudoinverse() const { return pinv_; }

 private:
  GroupSpec g_;
  Matrix pinv_;
};

PairDecomposition duetre_decompose(const GroupSpec& g, const Vector& target);

/// 2m + 2: leaves p - 3 = 2(m - 1) + 1 odd, i.e. m - 1 reduced pairs.
int default_p(const GroupSpec& g);

struct MultiExpSolution {
  int p = 0;
  std::vector<Vector> u;
  double residual_z = 0.0;
  double residual_t = 0.0;
  double residual = 0.0;  ///< Euclidean norm of (residual_z, residual_t)
  double size = 0.0;      ///< sum_j |u_j|
  double bound_ratio = 0.0;  ///< size / (|z| + |t|^{1/2}); 0 for the identity target
};

/// Solves Gamma(xi + u_1, ..., xi + u_p) - Gamma(xi, ..., xi) = target
/// (coordinate difference) with |u| controlled by |z| + |t|^{1/2}. The
/// construction never reads xi; xi is only used for the residual.
class GammaSolver {
 public:
  GammaSolver(const GroupSpec& g, std::optional<int> p = std::nullopt);

  int p() const { return p_; }
  /// The u_j only (no residual evaluation).
  std::vector<Vector> construct(const Point& target) const;
  MultiExpSolution solve(const Vector& xi, const Point& target) const;

 private:
  GroupSpec g_;
  int p_;
  PairDecomposer decomposer_;
  RickTransform rick_;
};

MultiExpSolution solve_gamma(const GroupSpec& g, const Vector& xi, const Point& target,
                             std::optional<int> p = std::nullopt);

/// Residual of a candidate: (z-part, t-part) norms of
/// Gamma(xi + u) - Gamma(xi, ..., xi) - target.
std::pair<double, double> gamma_residual(const GroupSpec& g, const Vector& xi,
                                         std::span<const Vector> u, const Point& target);

struct OpennessSample {
  double r;
  double target_norm;
  double solution_size;  ///< Euclidean norm of (u_1, ..., u_p) in Z^p
  double residual;
};

struct OpennessRow {
  double r;
  double worst_size;  ///< max over directions of |(u_1..u_p)| at target norm c0 r^2
  double c0;          ///< largest c with all sampled targets of norm c r^2 solved inside the r-ball
};

struct OpennessReport {
  std::vector<OpennessRow> rows;
  std::vector<OpennessSample> samples;
  double vertical_exponent = 0.0;    ///< log-log slope of size vs |t| for pure-vertical targets
  double horizontal_exponent = 0.0;  ///< same for pure-horizontal targets
  double c0 = 0.0;                   ///< min over rows
};

/// Measures the quadratic openness of Gamma at (xi, ..., xi). `radii` must be
/// positive and strictly decreasing.
OpennessReport openness_probe(const GroupSpec& g, const Vector& xi, std::span<const double> radii,
                              int n_dirs, std::uint64_t seed, std::optional<int> p = std::nullopt,
                              Execution exec = Execution::Parallel);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace carnot
