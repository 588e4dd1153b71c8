#pragma once

// Enumeration of the local extrema of P(x) = prod <v_j, x> on the unit sphere.
//
// Each chamber of the complement of the hyperplanes v_j^perp holds exactly one
// extremal point: the minimizer of the strictly convex barrier
//
//     psi(x) = |x|^2 / 2 - (1/n) sum log |<v_j, x>|
//
// whose stationarity condition x = (1/n) sum v_j / <v_j, x> is the extremality
// condition itself. Minimizers land on the sphere without normalization.
// Chambers are found by a max-margin LP per sign pattern and solved by a
// damped Newton method that never leaves the chamber.

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "polext/numerics.hpp"
#include "polext/systems.hpp"

namespace polext::extrema {

using numerics::Matrix;
using numerics::Vector;
using systems::VectorSystem;

struct SignPattern {
  std::vector<int> signs;  // each -1 or +1

  std::size_t size() const { return signs.size(); }
  int operator[](std::size_t j) const { return signs[j]; }
  SignPattern negated() const;
  std::string to_string() const;  // e.g. "+-+"

  /// Lexicographic order of the k-th pattern, -1 before +1.
  static SignPattern from_index(std::uint64_t index, std::size_t n);
  static SignPattern of(const VectorSystem& sys, std::span<const double> x);

  friend auto operator<=>(const SignPattern&, const SignPattern&) = default;
};

struct ExtremalPoint {
  Vector u;
  SignPattern pattern;
  double value_P = 0.0;
  double value_S = 0.0;
  double weight_mu = 0.0;
  double fixed_point_residual = 0.0;
  int newton_iters = 0;

  friend bool operator==(const ExtremalPoint&, const ExtremalPoint&) = default;
};

struct ExtremaSet {
  VectorSystem system;
  std::vector<ExtremalPoint> points;
  std::optional<std::uint64_t> expected_count;
  bool complete = false;

  friend bool operator==(const ExtremaSet&, const ExtremaSet&) = default;
};

// Potential and derivatives. All throw BoundaryError when some <v_j, x> = 0.
double psi(const VectorSystem& sys, std::span<const double> x);
Vector psi_gradient(const VectorSystem& sys, std::span<const double> x);
Matrix psi_hessian(const VectorSystem& sys, std::span<const double> x);

/// |u - (1/n) sum v_j / <v_j, u>|
double fixed_point_residual(const VectorSystem& sys, std::span<const double> u);

inline constexpr int kNewtonIterationCap = 200;
inline constexpr int kLineSearchHalvings = 60;
inline constexpr double kNewtonGradientTol = 1e-12;
/// Newton also stops once the step is below this times 1 + |x|. On either
/// stop it takes the final step if that stays in the chamber.
inline constexpr double kNewtonStepTol = 1e-12;

/// Damped Newton on psi from x0 inside the chamber of `pattern`.
/// When psi_trace is given, psi at every accepted iterate is appended.
ExtremalPoint solve_chamber(const VectorSystem& sys, const SignPattern& pattern,
                            std::span<const double> x0,
                            std::vector<double>* psi_trace = nullptr);

inline constexpr double kMarginThreshold = 1e-9;

/// Max-margin interior point of the chamber (as a box-constrained LP), or
/// nullopt when the best margin is <= 1e-9.
std::optional<Vector> feasible_pattern(const VectorSystem& sys, const SignPattern& pattern);

/// 2 * sum_{k<d} C(n-1, k): chambers of n central hyperplanes in general
/// position in R^d.
std::uint64_t expected_region_count(std::size_t d, std::size_t n);

struct EnumerateOptions {
  std::size_t pattern_budget = 20;
  unsigned parallelism = 0;  // 0 = hardware concurrency
  /// Allow repeated directions. Chamber critical points and sup |P| are
  /// still found; the weighted-sum identities do not hold.
  bool allow_parallel = false;
};

ExtremaSet enumerate_extrema(const VectorSystem& sys, const EnumerateOptions& options = {});

/// Smallest pairwise distance between points (infinity for fewer than two).
double min_pairwise_distance(const ExtremaSet& es);

inline constexpr double kDedupTolerance = 1e-6;

}  // namespace polext::extrema
