// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "polext/certify.hpp"
#include "polext/errors.hpp"
#include "polext/extrema.hpp"
#include "polext/systems.hpp"

using namespace polext;
using extrema::ExtremaSet;
using numerics::Vector;
using systems::CoxeterFamily;
using systems::VectorSystem;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail << "first failure: " << what << "; ";
    pass = pass && ok;
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

Vector random_unit(numerics::SplitMix64& rng, std::size_t d) {
  Vector x(d);
  for (auto& c : x) c = rng.gaussian();
  const double len = numerics::norm(x);
  for (auto& c : x) c /= len;
  return x;
}

double min_S(const ExtremaSet& es) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& p : es.points) m = std::min(m, p.value_S);
  return m;
}

double max_absP(const ExtremaSet& es) {
  double m = 0;
  for (const auto& p : es.points) m = std::max(m, std::abs(p.value_P));
  return m;
}

// ---------------------------------------------------------------------------

void sixty_degree_pair(Outcome& o) {
  const auto t0 = Clock::now();
  const double s = std::sqrt(3.0) / 2;
  const VectorSystem sys(2, {{1, 0}, {0.5, s}});
  const auto es = extrema::enumerate_extrema(sys);
  const double secs = seconds_since(t0);

  struct Expect {
    Vector u;
    double S, mu, P;
  };
  const std::vector<Expect> want{{{s, 0.5}, 8.0 / 3, 3.0 / 8, 0.75},
                                 {{-s, -0.5}, 8.0 / 3, 3.0 / 8, 0.75},
                                 {{-0.5, s}, 8.0, 1.0 / 8, -0.25},
                                 {{0.5, -s}, 8.0, 1.0 / 8, -0.25}};
  o.require(es.points.size() == 4, "exactly 4 extrema");
  double worst = 0;
  for (const auto& w : want) {
    const auto it = std::min_element(es.points.begin(), es.points.end(), [&](const auto& a, const auto& b) {
      return numerics::distance(a.u, w.u) < numerics::distance(b.u, w.u);
    });
    worst = std::max({worst, numerics::distance(it->u, w.u), std::abs(it->value_S - w.S),
                      std::abs(it->weight_mu - w.mu), std::abs(it->value_P - w.P)});
  }
  o.require(worst <= 1e-12, "points, S, mu, P within 1e-12");
  double sum = 0;
  for (const auto& p : es.points) sum += (p.value_S - 4) * p.weight_mu;
  o.require(std::abs(sum) <= 1e-12, "|sum (S - n^2) mu| <= 1e-12");
  o.require(secs < 0.1, "runtime < 0.1 s");
  o.detail << "count=" << es.points.size() << " max_dev=" << sci(worst) << " |sum|=" << sci(std::abs(sum))
           << " time=" << sci(secs) << "s";
}

void basis_completeness(Outcome& o) {
  const auto t0 = Clock::now();
  double worst_ej = 0;
  int systems_run = 0;
  auto check = [&](std::size_t n, std::uint64_t seed) {
    const auto sys = systems::make_random(n, n, seed);
    const auto es = extrema::enumerate_extrema(sys);
    const std::string tag = "n=" + std::to_string(n) + " seed=" + std::to_string(seed);
    o.require(es.complete && es.points.size() == (1ULL << n), tag + " has 2^n extrema");
    const double ej = certify::euler_jacobi_theorem_residual(es);
    worst_ej = std::max(worst_ej, ej);
    o.require(ej <= 1e-8, tag + " ej residual");
    o.require(min_S(es) <= double(n * n) * (1 + 1e-9), tag + " min_S <= n^2");
    ++systems_run;
  };
  for (std::size_t n = 2; n <= 10; ++n)
    for (std::uint64_t seed = 1; seed <= 50; ++seed) check(n, seed);
  check(12, 1);
  check(14, 1);
  const double secs = seconds_since(t0);
  o.require(secs < 60, "total runtime < 60 s");
  o.detail << "systems=" << systems_run << " max_ej=" << sci(worst_ej) << " time=" << sci(secs) << "s";
}

void orthonormal_equality(Outcome& o) {
  double dS = 0, dP = 0, dmu = 0;
  for (std::size_t n = 1; n <= 12; ++n) {
    const auto es = extrema::enumerate_extrema(systems::make_orthonormal(n));
    const double nn = double(n);
    for (const auto& p : es.points) {
      dS = std::max(dS, rel(p.value_S, nn * nn));
      dP = std::max(dP, rel(std::abs(p.value_P), std::pow(nn, -nn / 2)));
      dmu = std::max(dmu, rel(p.weight_mu, std::ldexp(1.0, -int(n))));
    }
    const auto rep = certify::strong_weak_report(es);
    o.require(rep.classification == certify::Classification::OrthonormalExtremal,
              "n=" + std::to_string(n) + " classified ORTHONORMAL_EXTREMAL");
    o.require(es.points.size() == (1ULL << n), "n=" + std::to_string(n) + " count");
  }
  o.require(dS <= 1e-9, "S = n^2");
  o.require(dP <= 1e-12, "|P| = n^{-n/2}");
  o.require(dmu <= 1e-10, "mu = 2^{-n}");
  o.detail << "n=1..12 rel_dev S=" << sci(dS) << " |P|=" << sci(dP) << " mu=" << sci(dmu);
}

void reflection_equality(Outcome& o) {
  std::vector<VectorSystem> systems_;
  for (int m = 3; m <= 12; ++m) systems_.push_back(systems::make_coxeter({CoxeterFamily::I2, m}));
  systems_.push_back(systems::make_coxeter({CoxeterFamily::A3, 0}));
  systems_.push_back(systems::make_coxeter({CoxeterFamily::B3, 0}));
  systems_.push_back(systems::make_coxeter({CoxeterFamily::H3, 0}));
  systems_.push_back(systems::make_coxeter({CoxeterFamily::Prism, 10}));
  double worst_eq = 0, worst_h = 0, h3_secs = 0;
  for (const auto& sys : systems_) {
    const auto t0 = Clock::now();
    const auto es = extrema::enumerate_extrema(sys);
    if (sys.label() == "H3") h3_secs = seconds_since(t0);
    const double n2 = double(sys.size() * sys.size());
    for (const auto& p : es.points) worst_eq = std::max(worst_eq, std::abs(p.value_S - n2) / n2);
    o.require(es.complete, sys.label() + " complete");
    o.require(!es.points.empty(), sys.label() + " has extrema");
    worst_h = std::max(worst_h, certify::harmonicity_residual(sys, 200, 1));
  }
  o.require(worst_eq <= 1e-7, "|S - n^2| <= 1e-7 n^2");
  o.require(worst_h <= 1e-8, "harmonicity <= 1e-8");
  o.require(h3_secs < 120, "H3 < 120 s");
  o.detail << "systems=" << systems_.size() << " max|S-n^2|/n^2=" << sci(worst_eq)
           << " max_harmonicity=" << sci(worst_h) << " H3_time=" << sci(h3_secs) << "s";
}

void general_euler_jacobi(Outcome& o) {
  double worst = 0;
  std::ostringstream control;
  for (std::size_t n = 3; n <= 8; ++n) {
    const auto sys = systems::make_random(n, n, 100 + n);
    const auto es = extrema::enumerate_extrema(sys);
    const auto dual = numerics::dual_basis(sys.as_matrix());
    for (std::uint64_t k = 0; k < 20; ++k) {
      const auto g = numerics::random_poly(n, static_cast<unsigned>(n - 1), 1000 * n + k);
      worst = std::max(worst, certify::euler_jacobi_general_residual(es, dual, g));
    }
    const auto ctl = certify::euler_jacobi_sharpness_control(es, dual, 20, 7 + n);
    control << " n" << n << ":" << ctl.above_threshold << "/20";
    o.require(ctl.conclusive && ctl.above_threshold >= 15,
              "n=" + std::to_string(n) + " control conclusive (>= 15 of 20 above 1e-4)");
  }
  o.require(worst <= 1e-8, "residuals <= 1e-8");
  o.detail << "max_residual=" << sci(worst) << " control" << control.str();
}

void generic_completeness(Outcome& o) {
  double worst = 0;
  std::size_t at5 = 0;
  for (std::size_t n = 4; n <= 8; ++n)
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const auto sys = systems::make_random(3, n, seed);
      const auto es = extrema::enumerate_extrema(sys);
      const auto want = 2 * (1 + (n - 1) + (n - 1) * (n - 2) / 2);
      const std::string tag = "n=" + std::to_string(n) + " seed=" + std::to_string(seed);
      o.require(es.points.size() == want && es.complete, tag + " count");
      if (n == 5) at5 = std::max(at5, es.points.size());
      const double ej = certify::euler_jacobi_theorem_residual(es);
      worst = std::max(worst, ej);
      o.require(ej <= 1e-8, tag + " ej residual");
      o.require(min_S(es) <= double(n * n) * (1 + 1e-9), tag + " min_S <= n^2");
    }
  o.detail << "systems=100 count(n=5)=" << at5 << " max_ej=" << sci(worst);
}

void differential_identities(Outcome& o) {
  numerics::SplitMix64 rng(2024);
  double grad = 0, lap = 0;
  for (int k = 0; k < 200; ++k) {
    const std::size_t n = 1 + k % 8;
    const auto sys = systems::make_random(2 + k % 4, n, 5000 + k);
    const auto x = random_unit(rng, sys.dim());
    const auto P = [&](std::span<const double> p) { return certify::eval_P(sys, p); };

    const auto g = certify::grad_P(sys, x);
    const auto fd = numerics::fd_gradient(P, x);
    Vector diff = fd;
    numerics::axpy(-1.0, g, diff);
    grad = std::max(grad, numerics::norm(diff) / numerics::norm(g));

    const auto h = numerics::fd_hessian(P, x);
    double trace = 0;
    for (std::size_t i = 0; i < sys.dim(); ++i) trace += h(i, i);
    // Relative to the two terms whose difference the Laplacian is.
    double S = 0;
    Vector m(sys.dim(), 0.0);
    for (const auto& v : sys.vectors()) {
      const double t = numerics::dot(v, x);
      S += 1 / (t * t);
      numerics::axpy(1 / t, v, m);
    }
    const double scale = std::abs(P(x)) * (numerics::dot(m, m) + S);
    lap = std::max(lap, std::abs(trace - certify::laplacian_P(sys, x)) / scale);
  }
  double jac = 0, phi = 0;
  std::size_t points = 0;
  for (std::size_t n = 2; n <= 8; ++n)
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const auto es = extrema::enumerate_extrema(systems::make_random(n, n, 70 + seed));
      for (const auto& r : certify::point_residuals(es)) {
        jac = std::max(jac, r.jacobian_fact.value_or(1.0));
        phi = std::max(phi, r.laplacian_id);
        ++points;
      }
    }
  o.require(grad <= 1e-6, "gradient vs central differences <= 1e-6");
  o.require(lap <= 1e-5, "Laplacian vs Hessian trace <= 1e-5");
  o.require(jac <= 1e-9, "Jacobian factorization <= 1e-9");
  o.require(phi <= 1e-9, "Laplacian identity at extrema <= 1e-9");
  o.detail << "grad=" << sci(grad) << " lap=" << sci(lap) << " jac=" << sci(jac) << " phi=" << sci(phi)
           << " (" << points << " extrema)";
}

void determinant_bound(Outcome& o) {
  numerics::SplitMix64 rng(777);
  double worst_gap = 0, worst_eq = 0;
  int equality_cases = 0;
  for (int k = 0; k < 1000; ++k) {
    const std::size_t n = 1 + k % 8;
    const auto sys = systems::make_random(1 + k % 6, n, 20000 + k);
    const auto b = certify::det_lower_bound_check(sys, random_unit(rng, sys.dim()));
    // lhs >= rhs - 1e-12, the slack scaled by rhs >= 1.
    worst_gap = std::max(worst_gap, (b.rhs - b.lhs) / b.rhs);
    if (n <= 2) {
      ++equality_cases;
      worst_eq = std::max(worst_eq, std::abs(b.lhs - b.rhs) / b.rhs);
    }
  }
  o.require(worst_gap <= 1e-12, "lhs >= rhs - 1e-12 rhs");
  o.require(worst_eq <= 1e-10, "equality for n <= 2");
  o.detail << "pairs=1000 max(rhs-lhs)/rhs=" << sci(worst_gap) << " n<=2 cases=" << equality_cases
           << " max_rel_eq=" << sci(worst_eq);
}

void square_free_reduction(Outcome& o) {
  const double r = 1 / std::sqrt(3.0);
  const VectorSystem dup(3, {{1, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {r, r, r}});

  // The doubled factor only changes multiplicities, so the chamber critical
  // points of the duplicated potential are the critical points of P itself.
  extrema::EnumerateOptions opt;
  opt.allow_parallel = true;
  const double original = max_absP(extrema::enumerate_extrema(dup, opt));
  numerics::SplitMix64 rng(55);
  double sampled = 0;
  for (int k = 0; k < 10000; ++k) sampled = std::max(sampled, std::abs(certify::eval_P(dup, random_unit(rng, 3))));
  o.require(sampled <= original * (1 + 1e-12), "random polish does not beat the enumerated sup");

  const double m05 = max_absP(extrema::enumerate_extrema(systems::split_duplicates(dup, 0.05)));
  const double m10 = max_absP(extrema::enumerate_extrema(systems::split_duplicates(dup, 0.1)));
  o.require(original - m05 > 1e-12, "theta=0.05 strictly below the original");
  o.require(m05 - m10 > 1e-12, "monotone in theta");
  o.detail << "original=" << original << " theta0.05=" << m05 << " theta0.1=" << m10
           << " gap=" << sci(original - m05);
}

void perturbation_continuity(Outcome& o) {
  const auto base_sys = systems::pad_dimension(systems::make_random(3, 5, 4), 5);
  const auto base = extrema::enumerate_extrema(base_sys);
  std::vector<double> match, bad;
  for (double t : {0.2, 0.1, 0.05}) {
    const auto pert = systems::perturb_to_basis(base_sys, t);
    const auto es = extrema::enumerate_extrema(pert);
    double worst = 0;
    std::vector<bool> used(es.points.size(), false);
    for (const auto& b : base.points) {
      const auto it = std::find_if(es.points.begin(), es.points.end(),
                                   [&](const auto& p) { return p.pattern == b.pattern; });
      if (it == es.points.end()) {
        o.require(false, "every base extremum has a perturbed match");
        continue;
      }
      used[it - es.points.begin()] = true;
      worst = std::max(worst, numerics::distance(b.u, it->u));
    }
    double unmatched = 0;
    for (std::size_t i = 0; i < es.points.size(); ++i) {
      if (used[i]) continue;
      double m = std::numeric_limits<double>::infinity();
      for (const auto& v : pert.vectors()) m = std::min(m, std::abs(numerics::dot(v, es.points[i].u)));
      unmatched = std::max(unmatched, m);
    }
    o.require(worst <= 5 * t, "match within 5t");
    match.push_back(worst);
    bad.push_back(unmatched);
  }
  o.require(match[1] < match[0] && match[2] < match[1], "match distances decrease with t");
  o.require(bad[1] < bad[0] && bad[2] < bad[1], "unmatched min |<v,u>| decreases with t");
  o.detail << "base=" << base.points.size() << " match(t=.2,.1,.05)=" << sci(match[0]) << "," << sci(match[1])
           << "," << sci(match[2]) << " unmatched=" << sci(bad[0]) << "," << sci(bad[1]) << ","
           << sci(bad[2]);
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"60-degree pair worked example", sixty_degree_pair},
      {"basis completeness and weighted sum", basis_completeness},
      {"orthonormal equality case", orthonormal_equality},
      {"reflection systems attain equality", reflection_equality},
      {"general weighted sum with degree control", general_euler_jacobi},
      {"generic non-basis completeness", generic_completeness},
      {"differential identities", differential_identities},
      {"determinant lower bound", determinant_bound},
      {"square-free reduction", square_free_reduction},
      {"perturbation continuity", perturbation_continuity},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    failed += !o.pass;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed ? 1 : 0;
}
