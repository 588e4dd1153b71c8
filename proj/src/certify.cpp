#include "polext/certify.hpp"

#include <algorithm>
#include <cmath>

#include "polext/errors.hpp"

namespace polext::certify {

using numerics::dot;
using numerics::norm;

namespace {

Vector projections(const VectorSystem& sys, std::span<const double> x) {
  if (x.size() != sys.dim()) throw DimensionError("point dimension does not match system");
  Vector a(sys.size());
  for (std::size_t j = 0; j < sys.size(); ++j) a[j] = dot(sys[j], x);
  return a;
}

Vector projections_nonzero(const VectorSystem& sys, std::span<const double> x) {
  Vector a = projections(sys, x);
  for (double aj : a)
    if (aj == 0.0) throw BoundaryError("point lies on a hyperplane <v_j, x> = 0");
  return a;
}

// sum v_j / <v_j, x>
Vector reciprocal_sum(const VectorSystem& sys, const Vector& a) {
  Vector g(sys.dim(), 0.0);
  for (std::size_t j = 0; j < sys.size(); ++j) numerics::axpy(1.0 / a[j], sys[j], g);
  return g;
}

void require_complete(const ExtremaSet& es) {
  if (!es.complete) throw CompletenessError("extrema enumeration is not certified complete");
}

void require_basis(const VectorSystem& sys, const Matrix& dual) {
  if (sys.size() != sys.dim() || dual.rows() != sys.size() || dual.cols() != sys.dim())
    throw PreconditionError("operation needs a basis of R^n and its dual basis");
}

double rel_n_pow(std::size_t n) {
  // n^{-n/2}
  return std::pow(static_cast<double>(n), -static_cast<double>(n) / 2.0);
}

}  // namespace

// ---------------------------------------------------------------------------

double eval_P(const VectorSystem& sys, std::span<const double> x) {
  double p = 1.0;
  for (double a : projections(sys, x)) p *= a;
  return p;
}

Vector grad_P(const VectorSystem& sys, std::span<const double> x) {
  const Vector a = projections(sys, x);
  double p = 1.0;
  for (double aj : a) p *= aj;
  if (p != 0.0) {
    Vector g = reciprocal_sum(sys, a);
    for (double& c : g) c *= p;
    return g;
  }
  Vector g(sys.dim(), 0.0);
  for (std::size_t j = 0; j < sys.size(); ++j) {
    double others = 1.0;
    for (std::size_t k = 0; k < sys.size(); ++k)
      if (k != j) others *= a[k];
    numerics::axpy(others, sys[j], g);
  }
  return g;
}

double laplacian_P(const VectorSystem& sys, std::span<const double> x) {
  const Vector a = projections_nonzero(sys, x);
  double p = 1.0, s = 0.0;
  for (double aj : a) {
    p *= aj;
    s += 1.0 / (aj * aj);
  }
  const Vector g = reciprocal_sum(sys, a);
  return p * (dot(g, g) - s);
}

double S_value(const VectorSystem& sys, std::span<const double> u) {
  double s = 0.0;
  for (double a : projections_nonzero(sys, u)) s += 1.0 / (a * a);
  return s;
}

double mu_weight(const VectorSystem& sys, std::span<const double> u) {
  return 1.0 / numerics::lu_determinant(extrema::psi_hessian(sys, u));
}

// ---------------------------------------------------------------------------

Vector h_map(const VectorSystem& sys, const Matrix& dual, std::span<const double> x) {
  require_basis(sys, dual);
  const std::size_t n = sys.size();
  Vector h(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const double coef = dot(sys[j], x) * dot(dual.row(j), x) - 1.0 / static_cast<double>(n);
    numerics::axpy(coef, sys[j], h);
  }
  return h;
}

Matrix jacobian_h(const VectorSystem& sys, const Matrix& dual, std::span<const double> x) {
  require_basis(sys, dual);
  const std::size_t n = sys.size();
  Matrix jac(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto v = std::span<const double>(sys[j]);
    const auto w = dual.row(j);
    const double vx = dot(v, x), wx = dot(w, x);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) jac(i, k) += v[i] * (wx * v[k] + vx * w[k]);
  }
  return jac;
}

// ---------------------------------------------------------------------------

double euler_jacobi_theorem_residual(const ExtremaSet& es) {
  require_complete(es);
  const double n2 = std::pow(static_cast<double>(es.system.size()), 2);
  double num = 0.0, den = 0.0;
  for (const auto& p : es.points) {
    num += (p.value_S - n2) * p.weight_mu;
    den += (std::abs(p.value_S - n2) + 1.0) * p.weight_mu;
  }
  return den > 0.0 ? std::abs(num) / den : std::abs(num);
}

double euler_jacobi_general_sum(const ExtremaSet& es, const PolyField& g) {
  double sum = 0.0;
  for (const auto& p : es.points) sum += g(p.u) * p.weight_mu / p.value_P;
  return sum;
}

double euler_jacobi_general_residual(const ExtremaSet& es, const Matrix& dual,
                                     const PolyField& g, unsigned degree) {
  require_complete(es);
  require_basis(es.system, dual);
  const std::size_t n = es.system.size();
  if (degree + 1 > n)
    throw DegreeError("Euler-Jacobi vanishing needs deg g <= n - 1 = " + std::to_string(n - 1));
  double num = 0.0, den = 1.0;
  for (const auto& p : es.points) {
    const double term = g(p.u) * p.weight_mu / p.value_P;
    num += term;
    den += std::abs(term);
  }
  return std::abs(num) / den;
}

double euler_jacobi_general_residual(const ExtremaSet& es, const Matrix& dual,
                                     const MonomialPoly& g) {
  if (g.dim != es.system.dim()) throw DimensionError("polynomial dimension mismatch");
  return euler_jacobi_general_residual(
      es, dual, [&g](std::span<const double> x) { return numerics::eval_poly(g, x); },
      g.degree());
}

SharpnessControl euler_jacobi_sharpness_control(const ExtremaSet& es, const Matrix& dual,
                                                int draws, std::uint64_t seed) {
  require_complete(es);
  require_basis(es.system, dual);
  const std::size_t n = es.system.size();
  SharpnessControl out;
  out.draws = draws;
  for (int k = 0; k < draws; ++k) {
    const MonomialPoly g = numerics::random_poly(n, static_cast<unsigned>(n), seed + k);
    double num = 0.0, den = 1.0;
    for (const auto& p : es.points) {
      const double term = numerics::eval_poly(g, p.u) * p.weight_mu / p.value_P;
      num += term;
      den += std::abs(term);
    }
    const double r = std::abs(num) / den;
    out.residuals.push_back(r);
    if (r > kSharpnessThreshold) ++out.above_threshold;
  }
  out.conclusive = 4 * out.above_threshold >= 3 * draws;
  return out;
}

// ---------------------------------------------------------------------------

namespace {

// Partial-pivot elimination in extended precision; d <= ~32.
long double determinant_ld(std::vector<std::vector<long double>> m) {
  const std::size_t d = m.size();
  long double det = 1.0L;
  for (std::size_t c = 0; c < d; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < d; ++r)
      if (std::fabs(m[r][c]) > std::fabs(m[piv][c])) piv = r;
    if (m[piv][c] == 0.0L) return 0.0L;
    if (piv != c) {
      std::swap(m[piv], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (std::size_t r = c + 1; r < d; ++r) {
      const long double f = m[r][c] / m[c][c];
      for (std::size_t k = c; k < d; ++k) m[r][k] -= f * m[c][k];
    }
  }
  return det;
}

// |v ^ w|^2 = 1 - <v,w>^2 for unit vectors, without the cancellation.
long double wedge_norm2(const Vector& v, const Vector& w) {
  long double s = 0.0L;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t l = i + 1; l < v.size(); ++l) {
      const long double m = static_cast<long double>(v[i]) * w[l] - static_cast<long double>(v[l]) * w[i];
      s += m * m;
    }
  return s;
}

}  // namespace

DetBound det_lower_bound_check(const VectorSystem& sys, std::span<const double> u) {
  projections_nonzero(sys, u);
  const std::size_t n = sys.size(), d = sys.dim();
  const long double nd = static_cast<long double>(n);
  std::vector<long double> a(n);
  for (std::size_t j = 0; j < n; ++j) {
    a[j] = 0.0L;
    for (std::size_t i = 0; i < d; ++i) a[j] += static_cast<long double>(sys[j][i]) * u[i];
  }
  std::vector<std::vector<long double>> h(d, std::vector<long double>(d, 0.0L));
  for (std::size_t i = 0; i < d; ++i) h[i][i] = 1.0L;
  for (std::size_t j = 0; j < n; ++j) {
    const long double w = 1.0L / (nd * a[j] * a[j]);
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c) h[r][c] += w * sys[j][r] * sys[j][c];
  }
  long double first = 0.0L, second = 0.0L;
  for (std::size_t j = 0; j < n; ++j) {
    first += 1.0L / (a[j] * a[j]);
    for (std::size_t k = j + 1; k < n; ++k)
      second += wedge_norm2(sys[j], sys[k]) / (a[j] * a[j] * a[k] * a[k]);
  }
  DetBound out;
  out.lhs = static_cast<double>(determinant_ld(std::move(h)));
  out.rhs = static_cast<double>(1.0L + first / nd + second / (nd * nd));
  return out;
}

double harmonicity_residual(const VectorSystem& sys, int samples, std::uint64_t seed) {
  numerics::SplitMix64 rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples;) {
    Vector x(sys.dim());
    for (double& c : x) c = rng.gaussian();
    const double len = norm(x);
    if (!(len > 0.0)) continue;
    for (double& c : x) c /= len;
    const Vector a = projections(sys, x);
    if (std::any_of(a.begin(), a.end(), [](double v) { return v == 0.0; })) continue;
    double p = 1.0, sum_inv2 = 0.0;
    for (double aj : a) {
      p *= aj;
      sum_inv2 += 1.0 / (aj * aj);
    }
    const Vector g = reciprocal_sum(sys, a);
    const double g2 = dot(g, g);
    const double lap = p * (g2 - sum_inv2);
    worst = std::max(worst, std::abs(lap) / (1.0 + std::abs(p) * (g2 + sum_inv2)));
    ++s;
  }
  return worst;
}

std::vector<bool> gram_sign_check(const ExtremaSet& es) {
  require_complete(es);
  const auto& sys = es.system;
  const std::size_t n = sys.size();
  const double nd = static_cast<double>(n);
  const Matrix gram = sys.gram();
  std::vector<bool> out;
  out.reserve(es.points.size());
  for (const auto& p : es.points) {
    const Vector a = projections(sys, p.u);
    double lo = INFINITY, hi = 0.0;
    for (double aj : a) {
      lo = std::min(lo, std::abs(aj));
      hi = std::max(hi, std::abs(aj));
    }
    const bool applies = std::abs(p.value_S - nd * nd) <= 1e-8 * nd * nd && hi - lo <= 1e-8;
    if (!applies) {
      out.push_back(true);
      continue;
    }
    Vector eps(n);
    for (std::size_t j = 0; j < n; ++j) eps[j] = a[j] < 0.0 ? -1.0 : 1.0;
    Vector signed_sum(sys.dim(), 0.0);
    for (std::size_t j = 0; j < n; ++j) numerics::axpy(eps[j] / std::sqrt(nd), sys[j], signed_sum);
    const bool bang = numerics::distance(signed_sum, p.u) <= 1e-8;
    const bool fixed = numerics::distance(gram * eps, eps) <= 1e-8;
    out.push_back(bang && fixed);
  }
  return out;
}

// ---------------------------------------------------------------------------

std::string to_string(Classification c) {
  switch (c) {
    case Classification::OrthonormalExtremal: return "ORTHONORMAL_EXTREMAL";
    case Classification::ReflectionEquality: return "REFLECTION_EQUALITY";
    case Classification::NonExtremal: return "NON_EXTREMAL";
  }
  return "NON_EXTREMAL";
}

std::optional<Classification> classification_from_string(const std::string& s) {
  for (auto c : {Classification::OrthonormalExtremal, Classification::ReflectionEquality,
                 Classification::NonExtremal})
    if (to_string(c) == s) return c;
  return std::nullopt;
}

Classification classify(const ExtremaSet& es, const systems::SystemDiagnostics& diag,
                        bool reflection, double equality_tol) {
  require_complete(es);
  const auto& sys = es.system;
  const std::size_t n = sys.size();
  const double n2 = static_cast<double>(n * n);

  if (diag.spans_dim == n) {
    const Matrix g = sys.gram();
    double off = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) off = std::max(off, std::abs(g(j, k) - (j == k ? 1.0 : 0.0)));
    double max_abs_p = 0.0;
    for (const auto& p : es.points) max_abs_p = std::max(max_abs_p, std::abs(p.value_P));
    const double target = rel_n_pow(n);
    if (off <= 1e-9 && std::abs(max_abs_p - target) <= 1e-9 * target)
      return Classification::OrthonormalExtremal;
  }
  if (reflection) {
    const bool equality = std::all_of(es.points.begin(), es.points.end(), [&](const auto& p) {
      return std::abs(p.value_S - n2) <= equality_tol * n2;
    });
    if (equality) return Classification::ReflectionEquality;
  }
  return Classification::NonExtremal;
}

// ---------------------------------------------------------------------------

std::map<std::string, double> Tolerances::as_map() const {
  return {{"ej_rel_tol", ej_rel_tol},
          {"equality_tol", equality_tol},
          {"identity_tol", identity_tol},
          {"harmonicity_tol", harmonicity_tol},
          {"conjecture_tol", conjecture_tol}};
}

bool Tolerances::set(const std::string& name, double value) {
  if (name == "ej_rel_tol") ej_rel_tol = value;
  else if (name == "equality_tol") equality_tol = value;
  else if (name == "identity_tol") identity_tol = value;
  else if (name == "harmonicity_tol") harmonicity_tol = value;
  else if (name == "conjecture_tol") conjecture_tol = value;
  else return false;
  return true;
}

std::vector<PointResiduals> point_residuals(const ExtremaSet& es) {
  const auto& sys = es.system;
  const std::size_t n = sys.size();
  const double nd = static_cast<double>(n);
  std::optional<Matrix> dual;
  if (systems::validate(sys).is_basis) {
    try {
      dual = numerics::dual_basis(sys.as_matrix());
    } catch (const SingularBasisError&) {
    }
  }

  std::vector<PointResiduals> out;
  out.reserve(es.points.size());
  for (const auto& p : es.points) {
    PointResiduals r;
    r.u = p.u;
    r.pattern = p.pattern;
    const double abs_p = std::abs(p.value_P);

    Vector diff = grad_P(sys, p.u);
    numerics::axpy(-nd * p.value_P, p.u, diff);
    r.eigen_rel = norm(diff) / (nd * abs_p);

    const double lap = laplacian_P(sys, p.u);
    r.laplacian_id = std::abs(lap - p.value_P * (nd * nd - p.value_S)) / (abs_p * nd * nd);

    if (dual) {
      const double det_j = numerics::lu_determinant(jacobian_h(sys, *dual, p.u));
      const double expected = p.value_P / p.weight_mu;  // P det(H)
      r.jacobian_fact = std::abs(det_j - expected) / std::abs(expected);
    }

    const double lhs = std::pow(abs_p, -2.0 / nd);
    r.amgm = (lhs - p.value_S / nd) / (p.value_S / nd);
    out.push_back(std::move(r));
  }
  return out;
}

CertificationReport strong_weak_report(const ExtremaSet& es, const ReportOptions& options) {
  require_complete(es);
  const auto& sys = es.system;
  const auto& tol = options.tol;
  const std::size_t n = sys.size();
  const double n2 = static_cast<double>(n * n);

  CertificationReport rep;
  rep.label = sys.label();
  rep.n = n;
  rep.dim = sys.dim();
  rep.point_count = es.points.size();
  rep.tolerances = tol;

  rep.min_S = INFINITY;
  double worst_equality = 0.0;
  for (const auto& p : es.points) {
    if (p.value_S < rep.min_S) {
      rep.min_S = p.value_S;
      rep.argmin_S = p.u;
    }
    if (std::abs(p.value_P) > rep.max_absP) {
      rep.max_absP = std::abs(p.value_P);
      rep.argmax_absP = p.u;
    }
    worst_equality = std::max(worst_equality, std::abs(p.value_S - n2));
  }
  rep.strong_holds = rep.min_S <= n2 * (1.0 + tol.conjecture_tol);
  rep.weak_holds = rep.max_absP >= rel_n_pow(n) * (1.0 - tol.conjecture_tol);
  rep.all_points_equality = worst_equality <= tol.equality_tol * n2;

  rep.points = point_residuals(es);
  rep.amgm_holds = std::all_of(rep.points.begin(), rep.points.end(),
                               [&](const PointResiduals& r) { return r.amgm <= tol.identity_tol; });

  rep.ej_theorem_residual = euler_jacobi_theorem_residual(es);

  const auto diag = systems::validate(sys);
  if (options.random_g > 0 && diag.is_basis) {
    const Matrix dual = numerics::dual_basis(sys.as_matrix());
    for (int k = 0; k < options.random_g; ++k) {
      const MonomialPoly g =
          numerics::random_poly(n, static_cast<unsigned>(n - 1), options.seed + k);
      rep.ej_general_residuals.push_back(euler_jacobi_general_residual(es, dual, g));
    }
  }
  if (options.harmonicity_samples > 0)
    rep.harmonicity_residual = harmonicity_residual(sys, options.harmonicity_samples, options.seed);

  rep.reflection_system = systems::is_reflection_system(sys, 1e-9);
  rep.classification = classify(es, diag, rep.reflection_system, tol.equality_tol);
  rep.gram_eigen_checks = gram_sign_check(es);

  auto gate = [&rep](bool ok, const char* name) {
    if (!ok) rep.failed_gates.emplace_back(name);
  };
  gate(rep.ej_theorem_residual <= tol.ej_rel_tol, "ej_theorem_residual");
  gate(std::all_of(rep.ej_general_residuals.begin(), rep.ej_general_residuals.end(),
                   [&](double r) { return r <= tol.ej_rel_tol; }),
       "ej_general_residuals");
  gate(rep.strong_holds, "strong_holds");
  gate(rep.amgm_holds, "amgm");
  bool identities = true;
  for (const auto& r : rep.points) {
    identities = identities && r.eigen_rel <= tol.identity_tol && r.laplacian_id <= tol.identity_tol;
    if (r.jacobian_fact) identities = identities && *r.jacobian_fact <= tol.identity_tol;
  }
  gate(identities, "point_identities");
  if (rep.harmonicity_residual && rep.reflection_system)
    gate(*rep.harmonicity_residual <= tol.harmonicity_tol, "harmonicity_residual");
  rep.gates_passed = rep.failed_gates.empty();
  return rep;
}

}  // namespace polext::certify
