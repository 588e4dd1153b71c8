#include "polext/simplex.hpp"

#include <cmath>

#include "polext/errors.hpp"

namespace polext::lp {

namespace {
constexpr double kEps = 1e-12;
}

LpResult maximize(const numerics::Matrix& a, const numerics::Vector& b,
                  const numerics::Vector& c) {
  const std::size_t m = a.rows(), n = a.cols();
  if (b.size() != m || c.size() != n) throw DimensionError("LP dimensions disagree");
  for (double bi : b)
    if (bi < 0.0) throw SolverError("LP right-hand side must be non-negative");

  // Tableau rows 0..m-1 are constraints with slacks, row m is the reduced
  // cost row (-c). Column n+m holds the right-hand side.
  const std::size_t cols = n + m + 1;
  numerics::Matrix t(m + 1, cols);
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) t(i, j) = a(i, j);
    t(i, n + i) = 1.0;
    t(i, cols - 1) = b[i];
    basis[i] = n + i;
  }
  for (std::size_t j = 0; j < n; ++j) t(m, j) = -c[j];

  LpResult result;
  const int guard = static_cast<int>(50 * (m + n) + 1000);
  while (true) {
    // Bland: smallest-index entering column with negative reduced cost.
    std::size_t enter = cols;
    for (std::size_t j = 0; j + 1 < cols; ++j)
      if (t(m, j) < -kEps) {
        enter = j;
        break;
      }
    if (enter == cols) break;

    // Ratio test; ties broken by smallest basic index.
    std::size_t leave = m;
    double best = INFINITY;
    for (std::size_t i = 0; i < m; ++i) {
      const double coef = t(i, enter);
      if (coef <= kEps) continue;
      const double ratio = t(i, cols - 1) / coef;
      if (ratio < best - kEps || (std::abs(ratio - best) <= kEps && basis[i] < basis[leave])) {
        best = ratio;
        leave = i;
      }
    }
    if (leave == m) {
      result.status = LpStatus::Unbounded;
      return result;
    }
    if (++result.pivots > guard) throw SolverError("simplex pivot guard exhausted");

    const double p = t(leave, enter);
    for (std::size_t j = 0; j < cols; ++j) t(leave, j) /= p;
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == leave) continue;
      const double f = t(i, enter);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < cols; ++j) t(i, j) -= f * t(leave, j);
    }
    basis[leave] = enter;
  }

  result.y.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] < n) result.y[basis[i]] = t(i, cols - 1);
  result.objective = t(m, cols - 1);
  return result;
}

}  // namespace polext::lp
