#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "frozen_oracles.hpp"
#include "polext/errors.hpp"
#include "polext/systems.hpp"

using namespace polext;
using namespace polext::systems;
using numerics::dot;
using numerics::norm;
using numerics::Vector;

namespace {

double max_dist(const Vector& a, const Vector& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Independent closure check on raw (not necessarily unit) roots: every
// reflection maps every root onto a root of the set, up to sign.
bool closed_raw(const std::vector<Vector>& roots) {
  for (const auto& a : roots)
    for (const auto& b : roots) {
      Vector r = b;
      numerics::axpy(-2.0 * dot(a, b) / dot(a, a), a, r);
      bool hit = false;
      for (const auto& c : roots) {
        Vector m = c;
        for (auto& x : m) x = -x;
        if (max_dist(r, c) < 1e-9 || max_dist(r, m) < 1e-9) hit = true;
      }
      if (!hit) return false;
    }
  return true;
}

}  // namespace

TEST_CASE("VectorSystem invariants") {
  CHECK_THROWS_AS(VectorSystem(2, {{1.0, 1.0}}), DimensionError);
  CHECK_THROWS_AS(VectorSystem(2, {}), DimensionError);
  CHECK_THROWS_AS(VectorSystem(2, {{1.0, 0.0, 0.0}}), DimensionError);
  CHECK_THROWS_AS(VectorSystem(1, {{std::nan("")}}), DimensionError);
  const auto s = VectorSystem::normalized(2, {{3, 4}});
  CHECK(std::abs(norm(s[0]) - 1.0) <= 1e-12);
  CHECK_THROWS_AS(VectorSystem::normalized(2, {{0, 0}}), DimensionError);
}

TEST_CASE("validate") {
  const auto d = validate(make_orthonormal(3));
  CHECK(d.is_basis);
  CHECK(d.is_unit);
  CHECK(d.min_pairwise_angle == doctest::Approx(std::numbers::pi / 2));
  CHECK_FALSE(d.has_parallel_pair);

  CHECK(validate(VectorSystem(2, {{1, 0}, {1, 0}})).has_parallel_pair);
  CHECK(validate(VectorSystem(2, {{1, 0}, {-1, 0}})).has_parallel_pair);

  const double r = 1 / std::sqrt(3.0);
  const auto four = validate(VectorSystem(3, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {r, r, r}}));
  CHECK(four.spans_dim == 3);
  CHECK_FALSE(four.is_basis);
}

TEST_CASE("make_orthonormal") {
  CHECK(make_orthonormal(1).vectors() == std::vector<Vector>{{1.0}});
  CHECK(make_orthonormal(2).vectors() == std::vector<Vector>{{1, 0}, {0, 1}});
  const auto g = make_orthonormal(5).gram();
  CHECK(g == numerics::Matrix::identity(5));
}

TEST_CASE("make_random") {
  const auto one = make_random(3, 1, 42);
  CHECK(std::abs(norm(one[0]) - 1) <= 1e-12);

  const auto five = make_random(2, 5, 9, 0.2);
  for (std::size_t j = 0; j < 5; ++j)
    for (std::size_t k = j + 1; k < 5; ++k)
      CHECK(std::acos(std::min(1.0, std::abs(dot(five[j], five[k])))) >= 0.2);

  CHECK(make_random(4, 6, 123, 0.1) == make_random(4, 6, 123, 0.1));
  CHECK_FALSE(make_random(4, 6, 123) == make_random(4, 6, 124));
  CHECK_THROWS_AS(make_random(2, 20, 1, 0.5), GenerationError);
}

TEST_CASE("generators produce unit vectors") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto s = make_random(1 + seed % 7, 1 + seed % 9, seed);
    for (const auto& v : s.vectors()) CHECK(std::abs(norm(v) - 1) <= 1e-12);
  }
  for (auto fam : {CoxeterFamily::A3, CoxeterFamily::B3, CoxeterFamily::H3}) {
    const auto s = make_coxeter({fam, 0});
    for (const auto& v : s.vectors()) CHECK(std::abs(norm(v) - 1) <= 1e-12);
  }
}

TEST_CASE("reflect") {
  const auto r = reflect(Vector{1, 0}, Vector{3, 4});
  CHECK(r == Vector{-3, 4});
  CHECK(reflect(Vector{1, 0}, Vector{0, 2}) == Vector{0, 2});
  const double h = 1 / std::sqrt(2.0);
  const auto q = reflect(Vector{1, 0}, Vector{h, h});
  CHECK(max_dist(q, Vector{-h, h}) <= 1e-15);
  CHECK_THROWS_AS(reflect(Vector{0, 0}, Vector{1, 1}), DegenerateAxisError);
}

TEST_CASE("reflect is an isometric involution") {
  numerics::SplitMix64 rng(77);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t d = 2 + trial % 6;
    Vector v(d), u(d);
    for (auto& c : v) c = rng.gaussian();
    for (auto& c : u) c = rng.gaussian();
    const auto once = reflect(v, u);
    CHECK(max_dist(reflect(v, once), u) <= 1e-12);
    CHECK(std::abs(norm(once) - norm(u)) <= 1e-12);
  }
}

TEST_CASE("is_reflection_system") {
  CHECK(is_reflection_system(make_orthonormal(2)));
  CHECK(is_reflection_system(make_coxeter({CoxeterFamily::I2, 5})));
  CHECK_FALSE(is_reflection_system(VectorSystem(2, {{1, 0}, {0.5, std::sqrt(3.0) / 2}})));
}

TEST_CASE("make_coxeter") {
  CHECK(make_coxeter({CoxeterFamily::I2, 2}).size() == 2);
  CHECK(max_dist(make_coxeter({CoxeterFamily::I2, 2})[1], Vector{0, 1}) <= 1e-15);
  CHECK(make_coxeter({CoxeterFamily::A3, 0}).size() == 6);
  CHECK(make_coxeter({CoxeterFamily::B3, 0}).size() == 9);
  const auto h3 = make_coxeter({CoxeterFamily::H3, 0});
  CHECK(h3.size() == oracle::kH3Lines);
  CHECK_FALSE(validate(h3).has_parallel_pair);
  const auto prism = make_coxeter({CoxeterFamily::Prism, 10});
  CHECK(prism.size() == 11);
  CHECK(prism.dim() == 3);
  CHECK_THROWS_AS(make_coxeter({CoxeterFamily::I2, 1}), SpecError);
  CHECK_THROWS_AS(make_coxeter({CoxeterFamily::Prism, 1}), SpecError);
  CHECK_THROWS_AS(make_coxeter({CoxeterFamily::Orthonormal, 0}), SpecError);
}

TEST_CASE("every Coxeter family is reflection closed") {
  for (int m = 2; m <= 24; ++m) {
    CHECK(is_reflection_system(make_coxeter({CoxeterFamily::I2, m})));
    CHECK(is_reflection_system(make_coxeter({CoxeterFamily::Prism, m})));
    CHECK(is_reflection_system(make_coxeter({CoxeterFamily::Orthonormal, m})));
  }
  for (auto fam : {CoxeterFamily::A3, CoxeterFamily::B3, CoxeterFamily::H3})
    CHECK(is_reflection_system(make_coxeter({fam, 0})));
}

TEST_CASE("normalizing B3 roots keeps closure") {
  std::vector<Vector> raw;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      for (double s : {1.0, -1.0}) {
        Vector v(3, 0.0);
        v[i] = 1;
        v[j] = s;
        raw.push_back(v);
      }
  for (int i = 0; i < 3; ++i) {
    Vector v(3, 0.0);
    v[i] = 1;
    raw.push_back(v);
  }
  CHECK(closed_raw(raw));
  CHECK(is_reflection_system(VectorSystem::normalized(3, raw)));
}

TEST_CASE("direct_sum") {
  const auto sum = direct_sum(make_orthonormal(1), make_coxeter({CoxeterFamily::I2, 10}));
  const auto prism = make_coxeter({CoxeterFamily::Prism, 10});
  // Prism puts the axis last; rotate coordinates (z, x, y) -> (x, y, z).
  REQUIRE(sum.size() == prism.size());
  for (const auto& v : sum.vectors()) {
    const Vector p{v[1], v[2], v[0]};
    CHECK(std::any_of(prism.vectors().begin(), prism.vectors().end(),
                      [&](const Vector& q) { return max_dist(p, q) <= 1e-15; }));
  }
  CHECK(direct_sum(make_orthonormal(2), make_orthonormal(3)).vectors() == make_orthonormal(5).vectors());
  CHECK(is_reflection_system(direct_sum(make_coxeter({CoxeterFamily::B3, 0}),
                                        make_coxeter({CoxeterFamily::I2, 5}))));
}

TEST_CASE("in_general_position") {
  CHECK(in_general_position(make_random(3, 6, 1)));
  CHECK(in_general_position(make_coxeter({CoxeterFamily::I2, 7})));
  CHECK_FALSE(in_general_position(make_coxeter({CoxeterFamily::B3, 0})));
}

TEST_CASE("perturb_to_basis") {
  const auto basis = make_random(4, 4, 3);
  CHECK(perturb_to_basis(basis, 0.3).vectors() == basis.vectors());

  const double s3 = std::sqrt(3.0) / 2;
  const VectorSystem planar(3, {{1, 0, 0}, {0.5, s3, 0}, {0, 1, 0}});
  const auto p = perturb_to_basis(planar, 0.1);
  CHECK(validate(p).is_basis);
  CHECK(p[0] == planar[0]);
  CHECK(p[1] == planar[1]);
  CHECK(std::abs(dot(p[2], planar[2]) - std::cos(0.1)) <= 1e-14);
  CHECK(numerics::matrix_rank(p.as_matrix()) == 3);

  CHECK_THROWS_AS(perturb_to_basis(planar, std::numbers::pi / 2), RangeError);
  CHECK_THROWS_AS(perturb_to_basis(make_coxeter({CoxeterFamily::I2, 3}), 0.1), RankError);
}

TEST_CASE("perturb_to_basis moves vectors by at most |t|") {
  const double s3 = std::sqrt(3.0) / 2;
  const VectorSystem planar(3, {{1, 0, 0}, {0.5, s3, 0}, {0, 1, 0}});
  for (double t : {0.3, 0.1, 0.01, -0.05}) {
    const auto p = perturb_to_basis(planar, t);
    for (std::size_t j = 0; j < 3; ++j)
      CHECK(numerics::distance(p[j], planar[j]) <= std::abs(t) + 1e-15);
  }
  // d > n: re-expressed in a 6-dim subspace, always a basis.
  const auto padded = pad_dimension(make_coxeter({CoxeterFamily::A3, 0}), 8);
  const auto p = perturb_to_basis(padded, 0.1);
  CHECK(p.dim() == 6);
  CHECK(validate(p).is_basis);
}

TEST_CASE("split_duplicates") {
  const auto s = split_duplicates(VectorSystem(2, {{1, 0}, {1, 0}}), 0.1);
  CHECK(max_dist(s[0], Vector{std::cos(0.1), std::sin(0.1)}) <= 1e-15);
  CHECK(max_dist(s[1], Vector{std::cos(0.1), -std::sin(0.1)}) <= 1e-15);

  const auto none = make_random(3, 4, 2);
  CHECK(split_duplicates(none, 0.1).vectors() == none.vectors());

  const auto three = split_duplicates(VectorSystem(2, {{1, 0}, {1, 0}, {0, 1}}), 0.05);
  CHECK(three.size() == 3);
  CHECK_FALSE(validate(three).has_parallel_pair);

  CHECK_THROWS_AS(split_duplicates(VectorSystem(2, {{1, 0}, {1, 0}}), 0.0), RangeError);
  CHECK_THROWS_AS(split_duplicates(VectorSystem(1, {{1}, {1}}), 0.1), CollisionError);
  // The fan reaches the other direction.
  CHECK_THROWS_AS(split_duplicates(VectorSystem(2, {{1, 0}, {1, 0}, {0, 1}}), std::numbers::pi / 2),
                  CollisionError);
}

TEST_CASE("split_duplicates keeps the group mean direction") {
  const VectorSystem triple(3, {{0, 0, 1}, {0, 0, 1}, {0, 0, 1}, {1, 0, 0}});
  const auto s = split_duplicates(triple, 0.05);
  CHECK_FALSE(validate(s).has_parallel_pair);
  Vector mean(3, 0.0);
  for (std::size_t j = 0; j < 3; ++j) numerics::axpy(1.0, s[j], mean);
  CHECK(std::abs(mean[0]) <= 1e-15);
  CHECK(std::abs(mean[1]) <= 1e-15);
}
