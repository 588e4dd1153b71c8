#include "polext/extrema.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>
#include <utility>

#include "polext/certify.hpp"
#include "polext/errors.hpp"
#include "polext/simplex.hpp"

namespace polext::extrema {

using numerics::dot;
using numerics::norm;

SignPattern SignPattern::negated() const {
  SignPattern p = *this;
  for (int& s : p.signs) s = -s;
  return p;
}

std::string SignPattern::to_string() const {
  std::string s;
  for (int v : signs) s.push_back(v > 0 ? '+' : '-');
  return s;
}

SignPattern SignPattern::from_index(std::uint64_t index, std::size_t n) {
  SignPattern p;
  p.signs.resize(n);
  for (std::size_t j = 0; j < n; ++j) p.signs[j] = (index >> (n - 1 - j)) & 1U ? 1 : -1;
  return p;
}

SignPattern SignPattern::of(const VectorSystem& sys, std::span<const double> x) {
  SignPattern p;
  p.signs.reserve(sys.size());
  for (const auto& v : sys.vectors()) p.signs.push_back(dot(v, x) < 0.0 ? -1 : 1);
  return p;
}

namespace {

// <v_j, x> for all j; throws BoundaryError on an exact zero.
Vector projections(const VectorSystem& sys, std::span<const double> x) {
  if (x.size() != sys.dim()) throw DimensionError("point dimension does not match system");
  Vector a(sys.size());
  for (std::size_t j = 0; j < sys.size(); ++j) {
    a[j] = dot(sys[j], x);
    if (a[j] == 0.0) throw BoundaryError("point lies on a hyperplane <v_j, x> = 0");
  }
  return a;
}

bool matches(const VectorSystem& sys, const SignPattern& pattern, std::span<const double> x) {
  for (std::size_t j = 0; j < sys.size(); ++j) {
    const double a = dot(sys[j], x);
    if (a == 0.0 || (a > 0.0) != (pattern[j] > 0)) return false;
  }
  return true;
}

}  // namespace

double psi(const VectorSystem& sys, std::span<const double> x) {
  const Vector a = projections(sys, x);
  double logs = 0.0;
  for (double aj : a) logs += std::log(std::abs(aj));
  return 0.5 * dot(x, x) - logs / static_cast<double>(sys.size());
}

Vector psi_gradient(const VectorSystem& sys, std::span<const double> x) {
  const Vector a = projections(sys, x);
  const double inv_n = 1.0 / static_cast<double>(sys.size());
  Vector g(x.begin(), x.end());
  for (std::size_t j = 0; j < sys.size(); ++j) numerics::axpy(-inv_n / a[j], sys[j], g);
  return g;
}

Matrix psi_hessian(const VectorSystem& sys, std::span<const double> x) {
  const Vector a = projections(sys, x);
  const std::size_t d = sys.dim();
  const double inv_n = 1.0 / static_cast<double>(sys.size());
  Matrix h = Matrix::identity(d);
  for (std::size_t j = 0; j < sys.size(); ++j) {
    const double w = inv_n / (a[j] * a[j]);
    const Vector& v = sys[j];
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c) h(r, c) += w * v[r] * v[c];
  }
  return h;
}

double fixed_point_residual(const VectorSystem& sys, std::span<const double> u) {
  return norm(psi_gradient(sys, u));
}

// ---------------------------------------------------------------------------

ExtremalPoint solve_chamber(const VectorSystem& sys, const SignPattern& pattern,
                            std::span<const double> x0, std::vector<double>* psi_trace) {
  if (pattern.size() != sys.size()) throw DimensionError("pattern length does not match n");
  if (x0.size() != sys.dim()) throw DimensionError("start point dimension mismatch");
  if (!matches(sys, pattern, x0))
    throw PreconditionError("start point is not inside the chamber " + pattern.to_string());

  Vector x(x0.begin(), x0.end());
  double f = psi(sys, x);
  if (psi_trace) psi_trace->push_back(f);
  int iter = 0;
  for (;; ++iter) {
    const Vector g = psi_gradient(sys, x);
    const double gnorm = norm(g);
    const bool converged = gnorm <= kNewtonGradientTol * (1.0 + norm(x));
    if (!converged && iter >= kNewtonIterationCap)
      throw ConvergenceError("Newton iteration cap exceeded in chamber " + pattern.to_string(),
                             pattern.to_string());

    Vector step;
    try {
      step = numerics::spd_solve(psi_hessian(sys, x), g);
    } catch (const NotPositiveDefiniteError&) {
      throw ConvergenceError("Hessian lost definiteness in chamber " + pattern.to_string(),
                             pattern.to_string());
    }
    for (double& s : step) s = -s;
    if (converged || norm(step) <= kNewtonStepTol * (1.0 + norm(x))) {
      Vector last(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) last[i] = x[i] + step[i];
      if (matches(sys, pattern, last)) x = std::move(last);
      break;
    }

    bool accepted = false;
    double alpha = 1.0;
    Vector cand(x.size());
    for (int k = 0; k <= kLineSearchHalvings; ++k, alpha *= 0.5) {
      for (std::size_t i = 0; i < x.size(); ++i) cand[i] = x[i] + alpha * step[i];
      if (!matches(sys, pattern, cand)) continue;
      const double fc = psi(sys, cand);
      if (fc < f) {
        x = cand;
        f = fc;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      // Decrease below double precision: take the full step if it shrinks |g|.
      for (std::size_t i = 0; i < x.size(); ++i) cand[i] = x[i] + step[i];
      if (matches(sys, pattern, cand) && norm(psi_gradient(sys, cand)) < gnorm) {
        const double fc = psi(sys, cand);
        x = cand;
        f = std::min(f, fc);
        accepted = true;
      }
    }
    if (!accepted)
      throw ConvergenceError("line search stalled in chamber " + pattern.to_string(),
                             pattern.to_string());
    if (psi_trace) psi_trace->push_back(f);
  }

  ExtremalPoint p;
  p.u = x;
  p.pattern = pattern;
  p.value_P = certify::eval_P(sys, x);
  p.value_S = certify::S_value(sys, x);
  p.weight_mu = certify::mu_weight(sys, x);
  p.fixed_point_residual = fixed_point_residual(sys, x);
  p.newton_iters = iter;
  return p;
}

std::optional<Vector> feasible_pattern(const VectorSystem& sys, const SignPattern& pattern) {
  if (pattern.size() != sys.size()) throw DimensionError("pattern length does not match n");
  // maximize t  s.t.  eps_j <v_j, x> >= t,  -1 <= x_i <= 1.
  // Shift to non-negative variables: x = y - 1 (y in [0, 2]), t = tau - T0.
  // Row j:  -eps_j <v_j, y> + tau <= T0 - eps_j sum_i v_ji, with T0 = d + 1
  // making every right-hand side non-negative.
  const std::size_t n = sys.size(), d = sys.dim();
  const double t0 = static_cast<double>(d) + 1.0;
  Matrix a(n + d, d + 1);
  Vector b(n + d);
  for (std::size_t j = 0; j < n; ++j) {
    double row_sum = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      a(j, i) = -pattern[j] * sys[j][i];
      row_sum += sys[j][i];
    }
    a(j, d) = 1.0;
    b[j] = std::max(0.0, t0 - pattern[j] * row_sum);
  }
  for (std::size_t i = 0; i < d; ++i) {
    a(n + i, i) = 1.0;
    b[n + i] = 2.0;
  }
  Vector c(d + 1, 0.0);
  c[d] = 1.0;
  const auto res = lp::maximize(a, b, c);
  if (res.status != lp::LpStatus::Optimal) throw SolverError("margin LP unbounded");
  const double margin = res.objective - t0;
  if (!(margin > kMarginThreshold)) return std::nullopt;
  Vector x(d);
  for (std::size_t i = 0; i < d; ++i) x[i] = res.y[i] - 1.0;
  if (!matches(sys, pattern, x)) return std::nullopt;
  return x;
}

std::uint64_t expected_region_count(std::size_t d, std::size_t n) {
  if (d == 0 || n == 0) throw DimensionError("region count needs d, n >= 1");
  std::uint64_t total = 0;
  for (std::size_t k = 0; k < d; ++k) total += numerics::binomial(n - 1, k);
  return 2 * total;
}

// ---------------------------------------------------------------------------

namespace {

struct Slot {
  std::uint64_t index;
  ExtremalPoint point;
};

std::optional<ExtremalPoint> solve_pattern(const VectorSystem& sys, std::uint64_t index) {
  const SignPattern pattern = SignPattern::from_index(index, sys.size());
  auto x = feasible_pattern(sys, pattern);
  if (!x) return std::nullopt;
  const double len = norm(*x);
  for (double& c : *x) c /= len;
  return solve_chamber(sys, pattern, *x);
}

}  // namespace

ExtremaSet enumerate_extrema(const VectorSystem& sys, const EnumerateOptions& options) {
  const auto diag = systems::validate(sys);
  if (diag.has_parallel_pair && !options.allow_parallel)
    throw PreconditionError("system has a parallel pair; split duplicates first");
  const std::size_t n = sys.size();
  if (n > options.pattern_budget || n >= 63)
    throw BudgetError("n = " + std::to_string(n) + " exceeds the pattern budget of " +
                      std::to_string(options.pattern_budget));

  const std::uint64_t total = std::uint64_t{1} << n;
  unsigned workers = options.parallelism ? options.parallelism
                                         : std::max(1U, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, std::max<std::uint64_t>(1, total / 64)));

  std::vector<std::vector<Slot>> found(workers);
  std::atomic<std::uint64_t> next{0};
  std::mutex error_mutex;
  std::uint64_t error_index = total;
  std::exception_ptr error;
  constexpr std::uint64_t kChunk = 64;

  auto work = [&](unsigned w) {
    while (true) {
      const std::uint64_t begin = next.fetch_add(kChunk);
      if (begin >= total) return;
      const std::uint64_t end = std::min(total, begin + kChunk);
      for (std::uint64_t k = begin; k < end; ++k) {
        try {
          if (auto p = solve_pattern(sys, k)) found[w].push_back({k, std::move(*p)});
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (k < error_index) {
            error_index = k;
            error = std::current_exception();
          }
          return;
        }
      }
    }
  };

  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  if (error) std::rethrow_exception(error);

  std::vector<Slot> all;
  for (auto& f : found) std::move(f.begin(), f.end(), std::back_inserter(all));
  std::sort(all.begin(), all.end(), [](const Slot& a, const Slot& b) { return a.index < b.index; });

  ExtremaSet es{sys, {}, std::nullopt, false};
  es.points.reserve(all.size());
  for (auto& s : all) es.points.push_back(std::move(s.point));

  if (diag.is_basis)
    es.expected_count = total;
  else if (!diag.has_parallel_pair && systems::in_general_position(sys))
    es.expected_count = expected_region_count(sys.dim(), n);

  const bool distinct = min_pairwise_distance(es) > kDedupTolerance;
  if (es.expected_count)
    es.complete = distinct && es.points.size() == *es.expected_count;
  else
    es.complete = distinct;  // every feasible chamber produced a solve
  return es;
}

double min_pairwise_distance(const ExtremaSet& es) {
  if (es.points.size() < 2) return INFINITY;
  // Sweep along a fixed generic direction: only neighbours whose projections
  // differ by less than the current best can be closer.
  const std::size_t d = es.points.front().u.size();
  numerics::SplitMix64 rng(0x5eedULL);
  Vector dir(d);
  for (double& c : dir) c = rng.gaussian();
  const double len = norm(dir);
  for (double& c : dir) c /= len;

  std::vector<std::pair<double, const Vector*>> pts;
  pts.reserve(es.points.size());
  for (const auto& p : es.points) pts.emplace_back(dot(dir, p.u), &p.u);
  std::sort(pts.begin(), pts.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  double best = INFINITY;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t k = i + 1; k < pts.size() && pts[k].first - pts[i].first < best; ++k)
      best = std::min(best, numerics::distance(*pts[i].second, *pts[k].second));
  return best;
}

}  // namespace polext::extrema
