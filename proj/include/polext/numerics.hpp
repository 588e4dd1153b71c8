#pragma once

// Dense kernels for the small problems in this library (d, n <= ~32).
// Everything here is unblocked and allocation-happy; nothing is tuned.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace polext::numerics {

using Vector = std::vector<double>;

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  /// Row-major construction; throws DimensionError on ragged rows.
  static Matrix from_rows(const std::vector<Vector>& rows);
  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<const double> entries() const { return data_; }

  Matrix transposed() const;
  Vector operator*(std::span<const double> x) const;
  Matrix operator*(const Matrix& other) const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);
double distance(std::span<const double> a, std::span<const double> b);
/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);
Vector scaled(double alpha, std::span<const double> x);
/// a (x) b as a rows(a) x len(b) matrix.
Matrix outer(std::span<const double> a, std::span<const double> b);

// ---------------------------------------------------------------------------
// Factorizations

/// Partial-pivot LU, PA = LU packed into one matrix.
struct LuFactorization {
  Matrix lu;
  std::vector<std::size_t> perm;
  int swap_sign = 1;

  double determinant() const;
  Vector solve(std::span<const double> b) const;
  /// Smallest and largest |U_ii|.
  double min_pivot() const;
  double max_pivot() const;
};

/// Never throws on singular input; a zero pivot is left in place.
LuFactorization lu_factor(const Matrix& m);

double lu_determinant(const Matrix& m);

/// Cholesky solve of H x = b. Throws NotPositiveDefiniteError on a
/// non-positive pivot.
Vector spd_solve(const Matrix& h, std::span<const double> b);

/// Rows w_k with <v_j, w_k> = delta_jk, i.e. W = V^{-T}.
/// Rejects V when min |pivot| < 1e-12 * max |pivot|.
Matrix dual_basis(const Matrix& v);

inline constexpr double kDualBasisPivotRatio = 1e-12;

/// Rank by full-pivot elimination with absolute tolerance `tol`.
std::size_t matrix_rank(const Matrix& m, double tol = 1e-10);

// ---------------------------------------------------------------------------
// Finite-difference oracles

using ScalarField = std::function<double(std::span<const double>)>;

inline constexpr double kDefaultFdStep = 1e-5;

/// Central differences (f(x+h e_i) - f(x-h e_i)) / 2h.
Vector fd_gradient(const ScalarField& f, std::span<const double> x,
                   double h = kDefaultFdStep);

/// Central second differences; symmetric by construction.
Matrix fd_hessian(const ScalarField& f, std::span<const double> x,
                  double h = 1e-4);

// ---------------------------------------------------------------------------
// Sparse-monomial polynomials

struct Monomial {
  double coefficient = 0.0;
  std::vector<unsigned> exponents;

  unsigned degree() const;
  friend bool operator==(const Monomial&, const Monomial&) = default;
};

struct MonomialPoly {
  std::size_t dim = 0;
  std::vector<Monomial> terms;

  unsigned degree() const;
  friend bool operator==(const MonomialPoly&, const MonomialPoly&) = default;
};

double eval_poly(const MonomialPoly& g, std::span<const double> x);

/// Every monomial of total degree <= max_degree (graded, then reverse-lex
/// on exponents) with a coefficient drawn uniformly from [-1, 1].
MonomialPoly random_poly(std::size_t dim, unsigned max_degree, std::uint64_t seed);

std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

// ---------------------------------------------------------------------------
// Randomness

/// SplitMix64 (Steele, Lea, Flood). All randomness in the project comes from
/// here so results are bit-identical across platforms and standard libraries.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal by Box-Muller; the spare value is cached.
  double gaussian();

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace polext::numerics
