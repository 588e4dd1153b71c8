#pragma once

// Residuals and verdicts for the identities satisfied by P(x) = prod <v_j, x>
// and its extremal points: derivative formulas, the quadratic map h and its
// Jacobian, the weighted Euler-Jacobi sums, the strong / weak polarization
// bounds, harmonicity of reflection systems and the extremal classification.
//
// Every check is a relative residual with its normalizer stated next to the
// function; absolute tolerances mean little once S(u) spans many decades.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "polext/extrema.hpp"
#include "polext/numerics.hpp"
#include "polext/systems.hpp"

namespace polext::certify {

using extrema::ExtremaSet;
using numerics::Matrix;
using numerics::MonomialPoly;
using numerics::Vector;
using systems::VectorSystem;

// ---------------------------------------------------------------------------
// P and friends

double eval_P(const VectorSystem& sys, std::span<const double> x);

/// P(x) sum v_j / <v_j, x>, or the plain product rule when P(x) = 0.
Vector grad_P(const VectorSystem& sys, std::span<const double> x);

/// P(x) (|sum v_j/<v_j,x>|^2 - sum 1/<v_j,x>^2). BoundaryError on a zero factor.
double laplacian_P(const VectorSystem& sys, std::span<const double> x);

/// sum 1 / <v_j, u>^2
double S_value(const VectorSystem& sys, std::span<const double> u);

/// 1 / det(I + (1/n) sum v_j v_j^T / <v_j, u>^2), by LU on the assembled matrix.
double mu_weight(const VectorSystem& sys, std::span<const double> u);

// ---------------------------------------------------------------------------
// Quadratic formulation (basis systems only)

/// h(x) = sum_j (<v_j,x><w_j,x> v_j - v_j / n); zero exactly at the extrema.
Vector h_map(const VectorSystem& sys, const Matrix& dual, std::span<const double> x);

/// J[i][k] = d h_i / d x_k = sum_j v_j[i] (<w_j,x> v_j[k] + <v_j,x> w_j[k]).
Matrix jacobian_h(const VectorSystem& sys, const Matrix& dual, std::span<const double> x);

// ---------------------------------------------------------------------------
// Euler-Jacobi sums

/// |sum (S - n^2) mu| / sum (|S - n^2| + 1) mu over a complete set.
double euler_jacobi_theorem_residual(const ExtremaSet& es);

using PolyField = std::function<double(std::span<const double>)>;

/// |sum g mu / P| / (sum |g| mu / |P| + 1). Requires a complete enumeration of
/// a basis system and deg g <= n - 1.
double euler_jacobi_general_residual(const ExtremaSet& es, const Matrix& dual,
                                     const MonomialPoly& g);
double euler_jacobi_general_residual(const ExtremaSet& es, const Matrix& dual,
                                     const PolyField& g, unsigned degree);

/// Signed numerator sum g mu / P of the above (no degree gate); used for the
/// sharpness control and for comparing sums directly.
double euler_jacobi_general_sum(const ExtremaSet& es, const PolyField& g);

struct SharpnessControl {
  int draws = 0;
  int above_threshold = 0;  // residual > 1e-4
  bool conclusive = false;  // above_threshold >= 3/4 of draws
  std::vector<double> residuals;
};

inline constexpr double kSharpnessThreshold = 1e-4;

/// Random g of degree exactly n, where the vanishing is expected to fail.
SharpnessControl euler_jacobi_sharpness_control(const ExtremaSet& es, const Matrix& dual,
                                                int draws, std::uint64_t seed);

// ---------------------------------------------------------------------------

struct DetBound {
  double lhs = 0.0;
  double rhs = 0.0;
};

/// lhs = det(I + (1/n) sum v_j v_j^T / <v_j,u>^2);
/// rhs = 1 + (1/n) sum 1/<v_j,u>^2 + (1/n^2) sum_{j<k} sin^2 theta_jk / (<v_j,u>^2 <v_k,u>^2).
DetBound det_lower_bound_check(const VectorSystem& sys, std::span<const double> u);

/// max over random unit x of |laplacian_P(x)| / (1 + |P(x)| (|sum v_j/<v_j,x>|^2 + S(x))),
/// i.e. the Laplacian relative to the two terms it is the difference of.
double harmonicity_residual(const VectorSystem& sys, int samples, std::uint64_t seed);

/// For points with S = n^2 and equal moduli |<v_j,u>|: u = (1/sqrt n) sum eps_j v_j
/// and G eps = eps (Euclidean norms, 1e-8). Other points are vacuously true.
std::vector<bool> gram_sign_check(const ExtremaSet& es);

// ---------------------------------------------------------------------------

enum class Classification { OrthonormalExtremal, ReflectionEquality, NonExtremal };

std::string to_string(Classification c);
std::optional<Classification> classification_from_string(const std::string& s);

Classification classify(const ExtremaSet& es, const systems::SystemDiagnostics& diag,
                        bool reflection, double equality_tol = 1e-7);

// ---------------------------------------------------------------------------

/// Named tolerances; the names are what `--tol name=value` accepts.
struct Tolerances {
  double ej_rel_tol = 1e-8;        // Euler-Jacobi residuals
  double equality_tol = 1e-7;      // |S - n^2| <= tol n^2 at every point
  double identity_tol = 1e-9;      // per-point identities
  double harmonicity_tol = 1e-9;   // reflection systems only
  double conjecture_tol = 1e-9;    // slack on min_S <= n^2 and max|P| >= n^{-n/2}

  std::map<std::string, double> as_map() const;
  /// False for an unknown name.
  bool set(const std::string& name, double value);
};

struct PointResiduals {
  Vector u;
  extrema::SignPattern pattern;
  double eigen_rel = 0.0;      // |grad P - n P u| / (n |P|)
  double laplacian_id = 0.0;   // |lap P - P (n^2 - S)| / (|P| n^2)
  std::optional<double> jacobian_fact;  // |det J_h - P det H| / |P det H|
  double amgm = 0.0;           // (|P|^{-2/n} - S/n) / (S/n), <= 0 up to rounding
};

struct ReportOptions {
  int random_g = 0;         // general Euler-Jacobi draws (basis systems)
  int harmonicity_samples = 0;
  std::uint64_t seed = 1;
  Tolerances tol;
};

struct CertificationReport {
  std::string label;
  std::size_t n = 0;
  std::size_t dim = 0;
  std::size_t point_count = 0;

  double ej_theorem_residual = 0.0;
  std::vector<double> ej_general_residuals;
  double min_S = 0.0;
  Vector argmin_S;
  double max_absP = 0.0;
  Vector argmax_absP;
  bool strong_holds = false;
  bool weak_holds = false;
  bool all_points_equality = false;
  bool amgm_holds = false;
  std::optional<double> harmonicity_residual;
  bool reflection_system = false;
  Classification classification = Classification::NonExtremal;
  std::vector<bool> gram_eigen_checks;
  std::vector<PointResiduals> points;
  Tolerances tolerances;

  /// Every residual gate: Euler-Jacobi, per-point identities, strong bound,
  /// and harmonicity when the system is a reflection system.
  bool gates_passed = false;
  std::vector<std::string> failed_gates;
};

std::vector<PointResiduals> point_residuals(const ExtremaSet& es);

CertificationReport strong_weak_report(const ExtremaSet& es, const ReportOptions& options = {});

}  // namespace polext::certify
