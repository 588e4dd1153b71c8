#include "polext/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "polext/certify.hpp"
#include "polext/errors.hpp"
#include "polext/extrema.hpp"
#include "polext/io.hpp"
#include "polext/svg.hpp"

namespace polext::cli {

using systems::CoxeterFamily;
using systems::VectorSystem;

namespace {

std::string g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string g6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

int parse_int_param(const std::string& text, const std::string& family) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::logic_error&) {
    throw SpecError("bad parameter '" + text + "' for family " + family);
  }
}

void require(bool ok, const std::string& message) {
  if (!ok) throw SpecError(message);
}

}  // namespace

VectorSystem make_family(const std::string& spec, const FamilyParams& p) {
  if (spec.rfind("sum:", 0) == 0) {
    std::vector<std::string> parts;
    std::stringstream ss(spec.substr(4));
    for (std::string part; std::getline(ss, part, '+');) parts.push_back(part);
    require(parts.size() >= 2 && std::none_of(parts.begin(), parts.end(),
                                              [](const auto& s) { return s.empty(); }),
            "sum needs at least two summands: sum:<family>+<family>");
    VectorSystem acc = make_family(parts[0], p);
    for (std::size_t k = 1; k < parts.size(); ++k) acc = systems::direct_sum(acc, make_family(parts[k], p));
    return acc;
  }
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  const bool has_param = colon != std::string::npos;
  const int param = has_param ? parse_int_param(spec.substr(colon + 1), name) : 0;

  if (name == "orthonormal") {
    const std::size_t d = has_param ? static_cast<std::size_t>(std::max(param, 0)) : p.dim;
    require(d >= 1, "orthonormal needs --dim or orthonormal:d");
    return systems::make_orthonormal(d);
  }
  if (name == "random" && !has_param) {
    require(p.dim >= 1 && p.n >= 1, "random needs --dim and --n");
    return systems::make_random(p.dim, p.n, p.seed, p.min_angle);
  }
  if (name == "random-basis" && !has_param) {
    require(p.n >= 1, "random-basis needs --n");
    return systems::make_random(p.n, p.n, p.seed, p.min_angle);
  }
  if (name == "i2" && has_param) return systems::make_coxeter({CoxeterFamily::I2, param});
  if (name == "prism" && has_param) return systems::make_coxeter({CoxeterFamily::Prism, param});
  if (!has_param) {
    if (name == "a3") return systems::make_coxeter({CoxeterFamily::A3, 0});
    if (name == "b3") return systems::make_coxeter({CoxeterFamily::B3, 0});
    if (name == "h3") return systems::make_coxeter({CoxeterFamily::H3, 0});
  }
  throw SpecError("unknown family '" + spec + "'");
}

std::pair<std::size_t, std::size_t> parse_range(const std::string& text) {
  const auto dots = text.find("..");
  auto number = [&](const std::string& s) -> std::size_t {
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); }))
      throw SpecError("bad range '" + text + "'");
    return std::stoul(s);
  };
  if (dots == std::string::npos) {
    const auto v = number(text);
    return {v, v};
  }
  return {number(text.substr(0, dots)), number(text.substr(dots + 2))};
}

namespace {

struct Context {
  std::ostream& out;
  std::ostream& err;
};

void print_diagnostics(std::ostream& out, const VectorSystem& sys) {
  const auto diag = systems::validate(sys);
  out << "label: " << sys.label() << "\n"
      << "dim: " << sys.dim() << "  n: " << sys.size() << "\n"
      << "spans: " << diag.spans_dim << "  basis: " << (diag.is_basis ? "yes" : "no") << "\n"
      << "min line angle: " << g6(diag.min_pairwise_angle) << " rad"
      << (diag.has_parallel_pair ? "  (parallel pair present)" : "") << "\n"
      << "general position: " << (systems::in_general_position(sys) ? "yes" : "no") << "\n";
}

extrema::ExtremaSet solve_or_throw(const VectorSystem& sys, std::size_t budget, unsigned threads) {
  extrema::EnumerateOptions opt;
  opt.pattern_budget = budget;
  opt.parallelism = threads;
  return extrema::enumerate_extrema(sys, opt);
}

std::pair<double, double> min_S_max_P(const extrema::ExtremaSet& es) {
  double min_S = std::numeric_limits<double>::infinity();
  double max_P = 0.0;
  for (const auto& p : es.points) {
    min_S = std::min(min_S, p.value_S);
    max_P = std::max(max_P, std::abs(p.value_P));
  }
  return {min_S, max_P};
}

int parallel_hint(Context& cx) {
  cx.err << "error: the system contains parallel vectors; enumeration needs distinct lines.\n"
         << "hint: rerun with --split-duplicates THETA (e.g. 0.05) to fan repeated directions "
            "apart via split_duplicates\n";
  return kSolveFailure;
}

// --- gen -------------------------------------------------------------------

struct GenArgs {
  std::string family;
  FamilyParams params;
  std::string output;
};

int cmd_gen(Context& cx, const GenArgs& a) {
  const VectorSystem sys = make_family(a.family, a.params);
  io::write_text_file(a.output, io::dump(io::system_to_json(sys)));
  print_diagnostics(cx.out, sys);
  return kOk;
}

// --- solve -----------------------------------------------------------------

struct SolveArgs {
  std::string input;
  std::string output;
  std::size_t budget = 20;
  unsigned threads = 0;
  double split = 0.0;
};

int cmd_solve(Context& cx, const SolveArgs& a) {
  VectorSystem sys = io::system_from_json(io::read_json_file(a.input));
  if (a.split > 0.0) sys = systems::split_duplicates(sys, a.split);
  if (systems::validate(sys).has_parallel_pair) return parallel_hint(cx);

  const auto t0 = std::chrono::steady_clock::now();
  const auto es = solve_or_throw(sys, a.budget, a.threads);
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  io::write_text_file(a.output, io::dump(io::extrema_to_json(es)));

  const auto [min_S, max_P] = min_S_max_P(es);
  cx.out << "count: " << es.points.size();
  if (es.expected_count) cx.out << " (expected " << *es.expected_count << ")";
  cx.out << "\ncomplete: " << (es.complete ? "yes" : "no") << "\n"
         << "min_S: " << g17(min_S) << "  n^2: " << sys.size() * sys.size() << "\n"
         << "max_absP: " << g17(max_P) << "\n"
         << "wall_ms: " << g6(ms) << "\n";
  return kOk;
}

// --- certify ---------------------------------------------------------------

struct CertifyArgs {
  std::string input;
  std::string extrema;
  std::string output;
  int random_g = 0;
  int harmonicity = 0;
  std::uint64_t seed = 1;
  std::vector<std::string> tol;
  std::size_t budget = 20;
  unsigned threads = 0;
};

int cmd_certify(Context& cx, const CertifyArgs& a) {
  certify::ReportOptions ro;
  ro.random_g = a.random_g;
  ro.harmonicity_samples = a.harmonicity;
  ro.seed = a.seed;
  for (const auto& item : a.tol) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw SpecError("--tol expects name=value, got '" + item + "'");
    double value = 0.0;
    try {
      value = std::stod(item.substr(eq + 1));
    } catch (const std::logic_error&) {
      throw SpecError("bad tolerance value in '" + item + "'");
    }
    if (!ro.tol.set(item.substr(0, eq), value))
      throw SpecError("unknown tolerance '" + item.substr(0, eq) + "'");
  }

  extrema::ExtremaSet es = [&] {
    if (!a.extrema.empty()) {
      auto loaded = io::extrema_from_json(io::read_json_file(a.extrema));
      if (!a.input.empty() && !(io::system_from_json(io::read_json_file(a.input)) == loaded.system))
        throw LoadError("extrema file was computed for a different system");
      return loaded;
    }
    if (a.input.empty()) throw SpecError("certify needs --input or --extrema");
    const VectorSystem sys = io::system_from_json(io::read_json_file(a.input));
    if (systems::validate(sys).has_parallel_pair) throw PreconditionError("parallel");
    return solve_or_throw(sys, a.budget, a.threads);
  }();

  const auto rep = certify::strong_weak_report(es, ro);
  const std::string text = io::dump(io::report_to_json(rep));
  if (a.output.empty())
    cx.out << text;
  else
    io::write_text_file(a.output, text);

  cx.err << "points: " << rep.point_count << "  ej_theorem_residual: " << g6(rep.ej_theorem_residual)
         << "  min_S: " << g17(rep.min_S) << "  classification: " << certify::to_string(rep.classification)
         << "\n";
  if (!rep.gates_passed) {
    cx.err << "failed gates:";
    for (const auto& g : rep.failed_gates) cx.err << " " << g;
    cx.err << "\n";
    return kGateFailure;
  }
  return kOk;
}

// --- sweep -----------------------------------------------------------------

struct SweepArgs {
  std::vector<std::string> families;
  std::string range;
  int seeds = 1;
  std::uint64_t seed = 1;
  std::size_t dim = 3;
  double min_angle = 0.0;
  std::string output;
  bool no_timing = false;
  std::size_t budget = 20;
  unsigned threads = 0;
};

bool seeded_family(const std::string& f) { return f == "random" || f == "random-basis"; }

std::string sanitize(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

std::string sweep_row(const SweepArgs& a, const std::string& family, std::size_t n,
                      std::optional<std::uint64_t> seed) {
  std::ostringstream row;
  row << family << "," << (seed ? std::to_string(*seed) : "-") << "," << n << ",";
  const double n_pow = std::pow(static_cast<double>(n), -static_cast<double>(n) / 2.0);
  try {
    FamilyParams fp{a.dim, n, seed.value_or(0), a.min_angle};
    std::string spec = family;
    if (family == "i2") spec = "i2:" + std::to_string(n);
    if (family == "prism") spec = "prism:" + std::to_string(n - 1);
    if (family == "orthonormal") spec = "orthonormal:" + std::to_string(n);
    const VectorSystem sys = make_family(spec, fp);
    if (sys.size() != n) throw SpecError("family does not produce n vectors");
    if (systems::validate(sys).has_parallel_pair) throw PreconditionError("parallel pair");

    const auto t0 = std::chrono::steady_clock::now();
    const auto es = solve_or_throw(sys, a.budget, a.threads);
    std::string status = "ok";
    double ej = std::numeric_limits<double>::quiet_NaN();
    if (es.complete)
      ej = certify::euler_jacobi_theorem_residual(es);
    else
      status = "incomplete";
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    const auto [min_S, max_P] = min_S_max_P(es);
    row << sys.dim() << "," << es.points.size() << "," << g17(min_S) << "," << n * n << ","
        << g17(max_P) << "," << g17(n_pow) << "," << g17(ej) << ","
        << (a.no_timing ? std::string("0") : g6(ms)) << "," << status;
  } catch (const Error& e) {
    row << ",,,,," << g17(n_pow) << ",,," << sanitize(std::string("error: ") + e.what());
  }
  return row.str();
}

int cmd_sweep(Context& cx, const SweepArgs& a) {
  std::vector<std::string> families;
  for (const auto& item : a.families) {
    std::stringstream ss(item);
    for (std::string f; std::getline(ss, f, ',');)
      if (!f.empty()) families.push_back(f);
  }
  for (const auto& f : families)
    if (!(seeded_family(f) || f == "orthonormal" || f == "i2" || f == "prism"))
      throw SpecError("sweep family must be one of random, random-basis, orthonormal, i2, prism");
  if (a.seeds < 0) throw SpecError("--seeds must be nonnegative");
  const auto [lo, hi] = parse_range(a.range);

  std::ostringstream csv;
  csv << kSweepHeader << "\n";
  std::size_t failures = 0;
  for (const auto& f : families) {
    for (std::size_t n = lo; n <= hi && lo >= 1; ++n) {
      if (seeded_family(f)) {
        for (int s = 0; s < a.seeds; ++s) {
          const auto line = sweep_row(a, f, n, a.seed + static_cast<std::uint64_t>(s));
          failures += line.find(",error: ") != std::string::npos;
          csv << line << "\n";
        }
      } else {
        const auto line = sweep_row(a, f, n, std::nullopt);
        failures += line.find(",error: ") != std::string::npos;
        csv << line << "\n";
      }
    }
  }
  if (a.output.empty())
    cx.out << csv.str();
  else
    io::write_text_file(a.output, csv.str());
  if (failures) cx.err << failures << " sub-run(s) failed; see the status column\n";
  return kOk;
}

// --- plot ------------------------------------------------------------------

struct PlotArgs {
  std::string input;
  std::string extrema;
  std::string output;
  std::vector<double> view;
};

int cmd_plot(Context&, const PlotArgs& a) {
  std::optional<extrema::ExtremaSet> es;
  if (!a.extrema.empty()) es = io::extrema_from_json(io::read_json_file(a.extrema));
  if (a.input.empty() && !es) throw SpecError("plot needs --input or --extrema");
  const VectorSystem sys = a.input.empty() ? es->system : io::system_from_json(io::read_json_file(a.input));
  svg::PlotOptions po;
  if (!a.view.empty()) {
    if (a.view.size() != 3) throw SpecError("--view expects x,y,z");
    po.view = a.view;
  }
  static const std::vector<extrema::ExtremalPoint> none;
  io::write_text_file(a.output, svg::render(sys, es ? es->points : none, po));
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Context cx{out, err};
  CLI::App app{"Extremal points of products of linear forms on the sphere", "polext"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "generate a vector system");
  g->add_option("--family", gen.family, "orthonormal[:d] random random-basis i2:m a3 b3 h3 prism:m sum:A+B")
      ->required();
  g->add_option("--dim", gen.params.dim, "ambient dimension");
  g->add_option("--n", gen.params.n, "number of vectors");
  g->add_option("--seed", gen.params.seed, "random seed");
  g->add_option("--min-angle", gen.params.min_angle, "minimum line angle for random draws");
  g->add_option("-o,--output", gen.output, "system JSON")->required();

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "enumerate all local extrema");
  s->add_option("-i,--input", solve.input, "system JSON")->required();
  s->add_option("-o,--output", solve.output, "extrema JSON")->required();
  s->add_option("--budget", solve.budget, "maximum n (2^n sign patterns)");
  s->add_option("--parallelism", solve.threads, "worker threads, 0 = auto");
  s->add_option("--split-duplicates", solve.split, "fan repeated directions apart by THETA first");

  CertifyArgs cert;
  auto* c = app.add_subcommand("certify", "certify the identities and write a report");
  c->add_option("-i,--input", cert.input, "system JSON");
  c->add_option("--extrema", cert.extrema, "precomputed extrema JSON");
  c->add_option("-o,--output", cert.output, "report JSON (stdout if omitted)");
  c->add_option("--random-g", cert.random_g, "random g draws for the general sum (bases)");
  c->add_option("--harmonicity", cert.harmonicity, "random points for the Laplacian check");
  c->add_option("--seed", cert.seed, "seed for random draws");
  c->add_option("--tol", cert.tol, "tolerance override name=value")->allow_extra_args(false);
  c->add_option("--budget", cert.budget, "maximum n");
  c->add_option("--parallelism", cert.threads, "worker threads, 0 = auto");

  SweepArgs sweep;
  auto* w = app.add_subcommand("sweep", "batch runs to CSV");
  w->add_option("--family", sweep.families, "random random-basis orthonormal i2 prism")
      ->required()
      ->allow_extra_args(false);
  w->add_option("--n", sweep.range, "size range a..b")->required();
  w->add_option("--seeds", sweep.seeds, "seeds per n for random families");
  w->add_option("--seed", sweep.seed, "first seed");
  w->add_option("--dim", sweep.dim, "dimension for the random family");
  w->add_option("--min-angle", sweep.min_angle, "minimum line angle for random draws");
  w->add_option("-o,--output", sweep.output, "CSV file (stdout if omitted)");
  w->add_flag("--no-timing", sweep.no_timing, "write 0 in wall_ms for byte-stable output");
  w->add_option("--budget", sweep.budget, "maximum n");
  w->add_option("--parallelism", sweep.threads, "worker threads, 0 = auto");

  PlotArgs plot;
  auto* p = app.add_subcommand("plot", "static SVG figure (d = 2 or 3)");
  p->add_option("-i,--input", plot.input, "system JSON");
  p->add_option("--extrema", plot.extrema, "extrema JSON");
  p->add_option("-o,--output", plot.output, "SVG file")->required();
  p->add_option("--view", plot.view, "view direction x,y,z")->delimiter(',')->expected(3);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*g) return cmd_gen(cx, gen);
    if (*s) return cmd_solve(cx, solve);
    if (*c) return cmd_certify(cx, cert);
    if (*w) return cmd_sweep(cx, sweep);
    if (*p) return cmd_plot(cx, plot);
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << "\nfailing pattern: " << e.pattern() << "\n";
    return kSolveFailure;
  } catch (const PreconditionError& e) {
    if (std::string(e.what()).find("parallel") != std::string::npos) return parallel_hint(cx);
    err << "error: " << e.what() << "\n";
    return kSolveFailure;
  } catch (const BudgetError& e) {
    err << "error: " << e.what() << "\n";
    return kSolveFailure;
  } catch (const SolverError& e) {
    err << "error: " << e.what() << "\n";
    return kSolveFailure;
  } catch (const CompletenessError& e) {
    err << "error: " << e.what() << "\n";
    return kSolveFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kUsage;
}

}  // namespace polext::cli
