#pragma once

// Configurations of unit vectors v_1..v_n in R^d: generators, validation,
// reflection closure and the two structural transforms (perturbation to a
// basis, splitting of repeated directions).

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "polext/numerics.hpp"

namespace polext::systems {

using numerics::Vector;

inline constexpr double kUnitTolerance = 1e-12;
inline constexpr double kParallelTolerance = 1e-10;

/// n >= 1 finite unit vectors in R^dim. Construction enforces the invariant;
/// non-parallelism is a property checked by validate().
class VectorSystem {
 public:
  VectorSystem(std::size_t dim, std::vector<Vector> vectors, std::string label = {});
  /// Scales every vector to unit length first (zero vectors are rejected).
  static VectorSystem normalized(std::size_t dim, std::vector<Vector> vectors,
                                 std::string label = {});

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return vectors_.size(); }
  const std::vector<Vector>& vectors() const { return vectors_; }
  const Vector& operator[](std::size_t j) const { return vectors_[j]; }
  const std::string& label() const { return label_; }
  void set_label(std::string label) { label_ = std::move(label); }

  /// Rows are the vectors.
  numerics::Matrix as_matrix() const;
  numerics::Matrix gram() const;

  friend bool operator==(const VectorSystem&, const VectorSystem&) = default;

 private:
  std::size_t dim_;
  std::vector<Vector> vectors_;
  std::string label_;
};

struct SystemDiagnostics {
  bool is_unit = false;
  double min_pairwise_angle = 0.0;  // between lines, in [0, pi/2]
  bool has_parallel_pair = false;
  std::size_t spans_dim = 0;
  bool is_basis = false;
};

SystemDiagnostics validate(const VectorSystem& sys);

/// True when every d-subset (or the whole set, for n <= d) is linearly
/// independent, i.e. the central arrangement is in general position.
bool in_general_position(const VectorSystem& sys);

VectorSystem make_orthonormal(std::size_t d);

/// Gaussian directions, each redrawn until its line angle to every earlier
/// vector is at least min_angle. Throws GenerationError after 10000 draws.
VectorSystem make_random(std::size_t d, std::size_t n, std::uint64_t seed,
                         double min_angle = 0.0);

inline constexpr int kRandomAttemptBudget = 10000;

Vector reflect(std::span<const double> v, std::span<const double> u);

/// Closure of {+-v_j} under every s_v, v in the set.
bool is_reflection_system(const VectorSystem& sys, double tol = 1e-9);

enum class CoxeterFamily { I2, A3, B3, H3, Prism, Orthonormal };

struct CoxeterSpec {
  CoxeterFamily family;
  int param = 0;
};

VectorSystem make_coxeter(const CoxeterSpec& spec);

/// a in the leading coordinates, b in the trailing ones.
VectorSystem direct_sum(const VectorSystem& a, const VectorSystem& b);

/// Appends zero coordinates up to `dim`.
VectorSystem pad_dimension(const VectorSystem& sys, std::size_t dim);

/// v_j^t = v_j for a greedy maximal independent subset, and
/// cos(t) v_j + sin(t) w_j for the rest, with w_j orthonormal and orthogonal
/// to span(v). Systems with d > n are first re-expressed in an n-dimensional
/// subspace containing the span.
VectorSystem perturb_to_basis(const VectorSystem& sys, double t);

/// Replaces each group of k mutually parallel vectors by k vectors fanned in
/// the plane of the group direction and a fixed orthogonal w.
VectorSystem split_duplicates(const VectorSystem& sys, double theta);

}  // namespace polext::systems
