#include "polext/systems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "polext/errors.hpp"

namespace polext::systems {

using numerics::dot;
using numerics::Matrix;
using numerics::norm;

VectorSystem::VectorSystem(std::size_t dim, std::vector<Vector> vectors, std::string label)
    : dim_(dim), vectors_(std::move(vectors)), label_(std::move(label)) {
  if (dim_ == 0) throw DimensionError("vector system needs dim >= 1");
  if (vectors_.empty()) throw DimensionError("vector system needs at least one vector");
  for (const auto& v : vectors_) {
    if (v.size() != dim_) throw DimensionError("vector length does not match dim");
    for (double c : v)
      if (!std::isfinite(c)) throw DimensionError("non-finite coordinate");
    if (std::abs(norm(v) - 1.0) > kUnitTolerance)
      throw DimensionError("vector is not unit length");
  }
}

VectorSystem VectorSystem::normalized(std::size_t dim, std::vector<Vector> vectors,
                                      std::string label) {
  for (auto& v : vectors) {
    const double len = norm(v);
    if (!(len > 0.0) || !std::isfinite(len)) throw DimensionError("cannot normalize vector");
    for (double& c : v) c /= len;
  }
  return VectorSystem(dim, std::move(vectors), std::move(label));
}

Matrix VectorSystem::as_matrix() const { return Matrix::from_rows(vectors_); }

Matrix VectorSystem::gram() const {
  const std::size_t n = size();
  Matrix g(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = j; k < n; ++k) g(j, k) = g(k, j) = dot(vectors_[j], vectors_[k]);
  return g;
}

// ---------------------------------------------------------------------------

SystemDiagnostics validate(const VectorSystem& sys) {
  SystemDiagnostics diag;
  diag.is_unit = std::all_of(sys.vectors().begin(), sys.vectors().end(), [](const Vector& v) {
    return std::abs(norm(v) - 1.0) <= kUnitTolerance;
  });
  double max_abs_cos = 0.0;
  for (std::size_t j = 0; j < sys.size(); ++j)
    for (std::size_t k = j + 1; k < sys.size(); ++k) {
      const double c = std::abs(dot(sys[j], sys[k]));
      max_abs_cos = std::max(max_abs_cos, c);
      if (c > 1.0 - kParallelTolerance) diag.has_parallel_pair = true;
    }
  diag.min_pairwise_angle = std::acos(std::min(1.0, max_abs_cos));
  diag.spans_dim = numerics::matrix_rank(sys.as_matrix(), 1e-10);
  diag.is_basis = sys.size() == sys.dim() && diag.spans_dim == sys.dim();
  return diag;
}

bool in_general_position(const VectorSystem& sys) {
  const std::size_t n = sys.size(), d = sys.dim();
  const std::size_t m = std::min(n, d);
  std::vector<std::size_t> idx(m);
  for (std::size_t i = 0; i < m; ++i) idx[i] = i;
  while (true) {
    Matrix sub(m, d);
    for (std::size_t r = 0; r < m; ++r)
      std::copy(sys[idx[r]].begin(), sys[idx[r]].end(), &sub(r, 0));
    if (numerics::matrix_rank(sub, 1e-10) < m) return false;
    // next combination
    std::size_t i = m;
    while (i > 0 && idx[i - 1] == n - m + (i - 1)) --i;
    if (i == 0) return true;
    ++idx[i - 1];
    for (std::size_t j = i; j < m; ++j) idx[j] = idx[j - 1] + 1;
  }
}

VectorSystem make_orthonormal(std::size_t d) {
  if (d == 0) throw SpecError("orthonormal system needs d >= 1");
  std::vector<Vector> vs(d, Vector(d, 0.0));
  for (std::size_t i = 0; i < d; ++i) vs[i][i] = 1.0;
  return VectorSystem(d, std::move(vs), "orthonormal(" + std::to_string(d) + ")");
}

VectorSystem make_random(std::size_t d, std::size_t n, std::uint64_t seed, double min_angle) {
  if (d == 0 || n == 0) throw SpecError("random system needs d >= 1 and n >= 1");
  numerics::SplitMix64 rng(seed);
  // Lines at angle >= min_angle have |cos| <= cos(min_angle).
  const double max_cos = std::cos(min_angle);
  std::vector<Vector> vs;
  vs.reserve(n);
  int attempts = 0;
  while (vs.size() < n) {
    if (++attempts > kRandomAttemptBudget)
      throw GenerationError("rejection budget exhausted; min_angle too large");
    Vector v(d);
    for (double& c : v) c = rng.gaussian();
    const double len = norm(v);
    if (!(len > 1e-300)) continue;
    for (double& c : v) c /= len;
    const bool ok = std::all_of(vs.begin(), vs.end(), [&](const Vector& w) {
      return std::abs(dot(v, w)) <= max_cos;
    });
    if (ok) vs.push_back(std::move(v));
  }
  return VectorSystem(d, std::move(vs),
                      "random(d=" + std::to_string(d) + ",n=" + std::to_string(n) +
                          ",seed=" + std::to_string(seed) + ")");
}

Vector reflect(std::span<const double> v, std::span<const double> u) {
  const double vv = dot(v, v);
  if (!(vv > 0.0)) throw DegenerateAxisError("reflection axis is zero");
  const double c = 2.0 * dot(u, v) / vv;
  Vector out(u.begin(), u.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= c * v[i];
  return out;
}

bool is_reflection_system(const VectorSystem& sys, double tol) {
  std::vector<Vector> phi;
  phi.reserve(2 * sys.size());
  for (const auto& v : sys.vectors()) {
    phi.push_back(v);
    phi.push_back(numerics::scaled(-1.0, v));
  }
  for (const auto& v : phi)
    for (const auto& w : phi) {
      const Vector img = reflect(v, w);
      double best = INFINITY;
      for (const auto& p : phi) best = std::min(best, numerics::distance(img, p));
      if (best > tol) return false;
    }
  return true;
}

// ---------------------------------------------------------------------------

namespace {

// Gram-Schmidt against an orthonormal set; empty when the residual is below tol.
std::optional<Vector> orthogonalize(const Vector& v, const std::vector<Vector>& basis,
                                    double tol = 1e-10) {
  Vector r = v;
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& q : basis) numerics::axpy(-dot(r, q), q, r);
  const double len = norm(r);
  if (len <= tol) return std::nullopt;
  for (double& c : r) c /= len;
  return r;
}

Vector unit_axis(std::size_t d, std::size_t i) {
  Vector e(d, 0.0);
  e[i] = 1.0;
  return e;
}

VectorSystem make_i2(int m) {
  std::vector<Vector> vs;
  for (int k = 0; k < m; ++k) {
    const double a = k * std::numbers::pi / m;
    vs.push_back({std::cos(a), std::sin(a)});
  }
  return VectorSystem::normalized(2, std::move(vs), "I2(" + std::to_string(m) + ")");
}

VectorSystem make_a3() {
  // Orthonormal basis of {x in R^4 : sum x = 0} from a fixed seed matrix.
  const std::vector<Vector> seed = {{1, -1, 0, 0}, {0, 1, -1, 0}, {0, 0, 1, -1}};
  std::vector<Vector> q;
  for (const auto& s : seed) q.push_back(*orthogonalize(s, q));
  std::vector<Vector> vs;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      Vector root(4, 0.0);
      root[i] = 1.0;
      root[j] = -1.0;
      vs.push_back({dot(q[0], root), dot(q[1], root), dot(q[2], root)});
    }
  return VectorSystem::normalized(3, std::move(vs), "A3");
}

VectorSystem make_b3() {
  std::vector<Vector> vs;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      for (double s : {1.0, -1.0}) {
        Vector r(3, 0.0);
        r[i] = 1.0;
        r[j] = s;
        vs.push_back(r);
      }
  for (int i = 0; i < 3; ++i) vs.push_back(unit_axis(3, i));
  return VectorSystem::normalized(3, std::move(vs), "B3");
}

VectorSystem make_h3() {
  const double tau = (1.0 + std::sqrt(5.0)) / 2.0;
  const double base[3] = {1.0, tau, 1.0 / tau};
  std::vector<Vector> vs;
  for (int i = 0; i < 3; ++i) vs.push_back(unit_axis(3, i));
  // Cyclic (even) permutations of (1, tau, 1/tau)/2 with the first sign fixed.
  for (int shift = 0; shift < 3; ++shift)
    for (double s1 : {1.0, -1.0})
      for (double s2 : {1.0, -1.0}) {
        const double signs[3] = {1.0, s1, s2};
        Vector v(3);
        for (int k = 0; k < 3; ++k) v[(k + shift) % 3] = signs[k] * base[k] / 2.0;
        vs.push_back(v);
      }
  return VectorSystem::normalized(3, std::move(vs), "H3");
}

}  // namespace

VectorSystem make_coxeter(const CoxeterSpec& spec) {
  switch (spec.family) {
    case CoxeterFamily::I2:
      if (spec.param < 2) throw SpecError("I2(m) needs m >= 2");
      return make_i2(spec.param);
    case CoxeterFamily::A3:
      return make_a3();
    case CoxeterFamily::B3:
      return make_b3();
    case CoxeterFamily::H3:
      return make_h3();
    case CoxeterFamily::Prism: {
      if (spec.param < 2) throw SpecError("PRISM(m) needs m >= 2");
      auto polygon = make_i2(spec.param);
      std::vector<Vector> vs;
      for (const auto& v : polygon.vectors()) vs.push_back({v[0], v[1], 0.0});
      vs.push_back({0.0, 0.0, 1.0});
      return VectorSystem(3, std::move(vs), "PRISM(" + std::to_string(spec.param) + ")");
    }
    case CoxeterFamily::Orthonormal:
      if (spec.param < 1) throw SpecError("ORTHONORMAL(d) needs d >= 1");
      return make_orthonormal(static_cast<std::size_t>(spec.param));
  }
  throw SpecError("unknown Coxeter family");
}

VectorSystem direct_sum(const VectorSystem& a, const VectorSystem& b) {
  const std::size_t dim = a.dim() + b.dim();
  std::vector<Vector> vs;
  for (const auto& v : a.vectors()) {
    Vector w(dim, 0.0);
    std::copy(v.begin(), v.end(), w.begin());
    vs.push_back(std::move(w));
  }
  for (const auto& v : b.vectors()) {
    Vector w(dim, 0.0);
    std::copy(v.begin(), v.end(), w.begin() + a.dim());
    vs.push_back(std::move(w));
  }
  return VectorSystem(dim, std::move(vs), a.label() + "+" + b.label());
}

VectorSystem pad_dimension(const VectorSystem& sys, std::size_t dim) {
  if (dim < sys.dim()) throw DimensionError("pad_dimension cannot shrink");
  std::vector<Vector> vs;
  for (const auto& v : sys.vectors()) {
    Vector w(dim, 0.0);
    std::copy(v.begin(), v.end(), w.begin());
    vs.push_back(std::move(w));
  }
  return VectorSystem(dim, std::move(vs), sys.label());
}

VectorSystem perturb_to_basis(const VectorSystem& sys, double t) {
  if (!(std::abs(t) < std::numbers::pi / 2)) throw RangeError("|t| must be below pi/2");
  const std::size_t n = sys.size();
  if (n > sys.dim()) throw RankError("more vectors than dimensions; pad the system first");

  std::vector<Vector> vs = sys.vectors();
  if (sys.dim() > n) {
    // Orthonormal basis of an n-dimensional subspace containing the span.
    std::vector<Vector> q;
    for (const auto& v : vs)
      if (auto r = orthogonalize(v, q)) q.push_back(*r);
    for (std::size_t i = 0; q.size() < n; ++i)
      if (auto r = orthogonalize(unit_axis(sys.dim(), i), q)) q.push_back(*r);
    for (auto& v : vs) {
      Vector c(n);
      for (std::size_t i = 0; i < n; ++i) c[i] = dot(q[i], v);
      const double len = norm(c);
      for (double& x : c) x /= len;
      v = std::move(c);
    }
  }

  std::vector<Vector> span_basis;
  std::vector<std::size_t> dependent;
  for (std::size_t j = 0; j < n; ++j) {
    if (auto r = orthogonalize(vs[j], span_basis))
      span_basis.push_back(*r);
    else
      dependent.push_back(j);
  }
  std::vector<Vector> complement;
  std::vector<Vector> all = span_basis;
  for (std::size_t i = 0; complement.size() < dependent.size(); ++i) {
    if (auto r = orthogonalize(unit_axis(n, i), all)) {
      all.push_back(*r);
      complement.push_back(*r);
    }
  }
  const double c = std::cos(t), s = std::sin(t);
  for (std::size_t k = 0; k < dependent.size(); ++k) {
    Vector& v = vs[dependent[k]];
    for (std::size_t i = 0; i < n; ++i) v[i] = c * v[i] + s * complement[k][i];
    const double len = norm(v);
    for (double& x : v) x /= len;
  }
  return VectorSystem(n, std::move(vs), sys.label() + "^t");
}

VectorSystem split_duplicates(const VectorSystem& sys, double theta) {
  if (!(theta > 0.0)) throw RangeError("split angle must be positive");
  const std::size_t n = sys.size(), d = sys.dim();
  std::vector<Vector> out = sys.vectors();
  std::vector<bool> grouped(n, false);
  bool changed = false;
  for (std::size_t j = 0; j < n; ++j) {
    if (grouped[j]) continue;
    std::vector<std::size_t> group{j};
    for (std::size_t k = j + 1; k < n; ++k)
      if (!grouped[k] && std::abs(dot(sys[j], sys[k])) > 1.0 - kParallelTolerance)
        group.push_back(k);
    for (std::size_t k : group) grouped[k] = true;
    if (group.size() < 2) continue;
    if (d < 2) throw CollisionError("cannot split directions in dimension 1");
    changed = true;

    const Vector& base = sys[j];
    std::size_t axis = 0;
    for (std::size_t i = 1; i < d; ++i)
      if (std::abs(base[i]) < std::abs(base[axis])) axis = i;
    const Vector w = *orthogonalize(unit_axis(d, axis), {base});

    // even k: +t, -t, +2t, -2t, ...; odd k: 0, +t, -t, ...
    const bool odd = group.size() % 2 == 1;
    for (std::size_t m = 0; m < group.size(); ++m) {
      const std::size_t slot = odd ? m + 1 : m + 2;  // 1 -> 0, 2 -> +1, 3 -> -1, ...
      const double step = static_cast<double>(slot / 2);
      const double angle = (slot % 2 == 0 ? step : -step) * theta;
      const double orient = dot(sys[group[m]], base) < 0.0 ? -1.0 : 1.0;
      Vector v(d);
      for (std::size_t i = 0; i < d; ++i)
        v[i] = orient * (std::cos(angle) * base[i] + std::sin(angle) * w[i]);
      out[group[m]] = std::move(v);
    }
  }
  if (!changed) return sys;
  VectorSystem result = VectorSystem::normalized(d, std::move(out), sys.label() + "~split");
  if (validate(result).has_parallel_pair)
    throw CollisionError("split angle creates a new parallel pair");
  return result;
}

}  // namespace polext::systems
