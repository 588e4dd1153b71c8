#include "polext/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "polext/errors.hpp"

namespace polext::numerics {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix Matrix::from_rows(const std::vector<Vector>& rows) {
  if (rows.empty()) return {};
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != m.cols_) throw DimensionError("ragged matrix rows");
    std::copy(rows[r].begin(), rows[r].end(), m.data_.begin() + r * m.cols_);
  }
  return m;
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

Vector Matrix::operator*(std::span<const double> x) const {
  if (x.size() != cols_) throw DimensionError("matrix-vector size mismatch");
  Vector y(rows_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r) y[r] = dot(row(r), x);
  return y;
}

Matrix Matrix::operator*(const Matrix& other) const {
  if (cols_ != other.rows_) throw DimensionError("matrix product size mismatch");
  Matrix out(rows_, other.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const double a = (*this)(i, k);
      if (a == 0.0) continue;
      for (std::size_t j = 0; j < other.cols_; ++j) out(i, j) += a * other(k, j);
    }
  return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("dot: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("distance: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  if (x.size() != y.size()) throw DimensionError("axpy: size mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

Vector scaled(double alpha, std::span<const double> x) {
  Vector y(x.begin(), x.end());
  for (double& v : y) v *= alpha;
  return y;
}

Matrix outer(std::span<const double> a, std::span<const double> b) {
  Matrix m(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) m(i, j) = a[i] * b[j];
  return m;
}

// ---------------------------------------------------------------------------

LuFactorization lu_factor(const Matrix& m) {
  if (!m.square()) throw DimensionError("LU of a non-square matrix");
  const std::size_t n = m.rows();
  LuFactorization f{m, std::vector<std::size_t>(n), 1};
  for (std::size_t i = 0; i < n; ++i) f.perm[i] = i;
  Matrix& a = f.lu;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(p, k))) p = i;
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
      std::swap(f.perm[k], f.perm[p]);
      f.swap_sign = -f.swap_sign;
    }
    const double pivot = a(k, k);
    if (pivot == 0.0) continue;
    for (std::size_t i = k + 1; i < n; ++i) {
      const double l = a(i, k) / pivot;
      a(i, k) = l;
      if (l == 0.0) continue;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= l * a(k, j);
    }
  }
  return f;
}

double LuFactorization::determinant() const {
  double det = swap_sign;
  for (std::size_t i = 0; i < lu.rows(); ++i) det *= lu(i, i);
  return det;
}

Vector LuFactorization::solve(std::span<const double> b) const {
  const std::size_t n = lu.rows();
  if (b.size() != n) throw DimensionError("LU solve: size mismatch");
  Vector x(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[perm[i]];
    for (std::size_t j = 0; j < i; ++j) s -= lu(i, j) * x[j];
    x[i] = s;
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = x[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= lu(i, j) * x[j];
    if (lu(i, i) == 0.0) throw SingularBasisError("LU solve: zero pivot");
    x[i] = s / lu(i, i);
  }
  return x;
}

double LuFactorization::min_pivot() const {
  double m = INFINITY;
  for (std::size_t i = 0; i < lu.rows(); ++i) m = std::min(m, std::abs(lu(i, i)));
  return m;
}

double LuFactorization::max_pivot() const {
  double m = 0.0;
  for (std::size_t i = 0; i < lu.rows(); ++i) m = std::max(m, std::abs(lu(i, i)));
  return m;
}

double lu_determinant(const Matrix& m) { return lu_factor(m).determinant(); }

Vector spd_solve(const Matrix& h, std::span<const double> b) {
  if (!h.square()) throw DimensionError("spd_solve: non-square matrix");
  const std::size_t n = h.rows();
  if (b.size() != n) throw DimensionError("spd_solve: size mismatch");
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = h(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0)) throw NotPositiveDefiniteError("spd_solve: non-positive pivot");
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = h(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / ljj;
    }
  }
  Vector y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * y[k];
    y[i] = s / l(i, i);
  }
  Vector x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = y[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= l(k, i) * x[k];
    x[i] = s / l(i, i);
  }
  return x;
}

Matrix dual_basis(const Matrix& v) {
  if (!v.square()) throw DimensionError("dual_basis: need n vectors in R^n");
  const auto f = lu_factor(v);
  if (!(f.min_pivot() >= kDualBasisPivotRatio * f.max_pivot()) || f.max_pivot() == 0.0)
    throw SingularBasisError("dual_basis: vectors are numerically dependent");
  // V W^T = I, so column k of W^T (= w_k) solves V w_k = e_k.
  const std::size_t n = v.rows();
  Matrix w(n, n);
  Vector e(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    e[k] = 1.0;
    const Vector col = f.solve(e);
    std::copy(col.begin(), col.end(), &w(k, 0));
    e[k] = 0.0;
  }
  return w;
}

std::size_t matrix_rank(const Matrix& m, double tol) {
  Matrix a = m;
  const std::size_t rows = a.rows(), cols = a.cols();
  std::size_t rank = 0;
  std::vector<bool> used_col(cols, false);
  for (std::size_t r = 0; r < rows && rank < cols; ++r) {
    // full pivot over the remaining block
    double best = 0.0;
    std::size_t br = 0, bc = 0;
    for (std::size_t i = rank; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j)
        if (!used_col[j] && std::abs(a(i, j)) > best) {
          best = std::abs(a(i, j));
          br = i;
          bc = j;
        }
    if (best <= tol) break;
    for (std::size_t j = 0; j < cols; ++j) std::swap(a(rank, j), a(br, j));
    used_col[bc] = true;
    for (std::size_t i = rank + 1; i < rows; ++i) {
      const double l = a(i, bc) / a(rank, bc);
      for (std::size_t j = 0; j < cols; ++j) a(i, j) -= l * a(rank, j);
    }
    ++rank;
  }
  return rank;
}

// ---------------------------------------------------------------------------

namespace {
double checked_eval(const ScalarField& f, std::span<const double> x) {
  const double v = f(x);
  if (!std::isfinite(v)) throw StencilError("non-finite value on the difference stencil");
  return v;
}
}  // namespace

Vector fd_gradient(const ScalarField& f, std::span<const double> x, double h) {
  Vector g(x.size());
  Vector p(x.begin(), x.end());
  for (std::size_t i = 0; i < x.size(); ++i) {
    p[i] = x[i] + h;
    const double fp = checked_eval(f, p);
    p[i] = x[i] - h;
    const double fm = checked_eval(f, p);
    p[i] = x[i];
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

Matrix fd_hessian(const ScalarField& f, std::span<const double> x, double h) {
  const std::size_t d = x.size();
  Matrix hess(d, d);
  Vector p(x.begin(), x.end());
  const double f0 = checked_eval(f, p);
  for (std::size_t i = 0; i < d; ++i) {
    p[i] = x[i] + h;
    const double fp = checked_eval(f, p);
    p[i] = x[i] - h;
    const double fm = checked_eval(f, p);
    p[i] = x[i];
    hess(i, i) = (fp - 2.0 * f0 + fm) / (h * h);
    for (std::size_t j = i + 1; j < d; ++j) {
      double acc = 0.0;
      for (int si : {1, -1})
        for (int sj : {1, -1}) {
          p[i] = x[i] + si * h;
          p[j] = x[j] + sj * h;
          acc += si * sj * checked_eval(f, p);
        }
      p[i] = x[i];
      p[j] = x[j];
      hess(i, j) = hess(j, i) = acc / (4.0 * h * h);
    }
  }
  return hess;
}

// ---------------------------------------------------------------------------

unsigned Monomial::degree() const {
  unsigned d = 0;
  for (unsigned e : exponents) d += e;
  return d;
}

unsigned MonomialPoly::degree() const {
  unsigned d = 0;
  for (const auto& t : terms) d = std::max(d, t.degree());
  return d;
}

double eval_poly(const MonomialPoly& g, std::span<const double> x) {
  if (x.size() != g.dim) throw DimensionError("eval_poly: dimension mismatch");
  double total = 0.0;
  for (const auto& t : g.terms) {
    if (t.exponents.size() != g.dim) throw DimensionError("eval_poly: malformed term");
    double m = t.coefficient;
    for (std::size_t i = 0; i < g.dim; ++i)
      for (unsigned e = 0; e < t.exponents[i]; ++e) m *= x[i];
    total += m;
  }
  return total;
}

namespace {
// Exponent vectors of total degree `deg`, first coordinate largest first.
void exponents_of_degree(std::size_t dim, unsigned deg, std::vector<unsigned>& cur,
                         std::size_t pos, std::vector<std::vector<unsigned>>& out) {
  if (pos + 1 == dim) {
    cur[pos] = deg;
    out.push_back(cur);
    return;
  }
  for (unsigned e = deg + 1; e-- > 0;) {
    cur[pos] = e;
    exponents_of_degree(dim, deg - e, cur, pos + 1, out);
  }
}
}  // namespace

MonomialPoly random_poly(std::size_t dim, unsigned max_degree, std::uint64_t seed) {
  MonomialPoly g{dim, {}};
  SplitMix64 rng(seed);
  if (dim == 0) {
    g.terms.push_back({rng.uniform(-1.0, 1.0), {}});
    return g;
  }
  std::vector<std::vector<unsigned>> exps;
  std::vector<unsigned> cur(dim, 0);
  for (unsigned deg = 0; deg <= max_degree; ++deg) exponents_of_degree(dim, deg, cur, 0, exps);
  g.terms.reserve(exps.size());
  for (auto& e : exps) g.terms.push_back({rng.uniform(-1.0, 1.0), std::move(e)});
  return g;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// ---------------------------------------------------------------------------

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double SplitMix64::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double phi = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(phi);
  has_spare_ = true;
  return r * std::cos(phi);
}

}  // namespace polext::numerics
