#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "polylab/canonical_current.hpp"
#include "polylab/checks.hpp"
#include "polylab/elliptic.hpp"

using namespace polylab;
using checks::json;

namespace {

constexpr const char* kOutputEnv = "POLYLAB_OUTPUT_DIR";

constexpr const char* kComplexGrammar =
    "Complex numbers: a, bi, a+bi, a-bi, i, -i; parts may use exponents (2.5e-3+1e-2i).";

struct Sink {
  std::ofstream file;
  std::ostream* out = &std::cout;

  // Explicit path wins; otherwise $POLYLAB_OUTPUT_DIR/<fallback>; otherwise stdout.
  void open(const std::string& path, const std::string& fallback) {
    std::filesystem::path target = path;
    if (target.empty()) {
      const char* dir = std::getenv(kOutputEnv);
      if (!dir || !*dir) return;
      std::filesystem::create_directories(dir);
      target = std::filesystem::path(dir) / fallback;
    }
    file.open(target);
    if (!file) throw std::runtime_error("cannot open output file " + target.string());
    out = &file;
  }
};

std::string num(double v) {
  char buf[40];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

json complex_json(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

int signal_exit(const std::string& kind, const std::string& what, json j) {
  j["signal"] = kind;
  j["message"] = what;
  std::cout << j.dump() << "\n";
  return 2;
}

struct EvalArgs {
  std::string quantity;
  std::string tau = "i";
  std::string z;
  std::string z0;
  int N = 0;
  double radius = GreenEvaluator::kDefaultSingularRadius;
};

int run_eval(const EvalArgs& a) {
  const cplx tau = checks::parse_complex(a.tau);
  const Lattice L = Lattice::from_tau(tau);
  json j;
  j["quantity"] = a.quantity;
  j["tau"] = checks::format_complex(tau);
  const GreenEvaluator G(L, a.radius);
  try {
    if (a.quantity == "eta") {
      const QuasiPeriods& Q = G.quasi();
      j["omega1"] = complex_json(L.omega1());
      j["omega2"] = complex_json(L.omega2());
      j["eta1"] = complex_json(Q.eta1);
      j["eta2"] = complex_json(Q.eta2);
      if (!a.z.empty()) {
        const cplx z = checks::parse_complex(a.z);
        j["z"] = checks::format_complex(z);
        j["eta_z"] = complex_json(Q.eta(z));
      }
      j["digits"] = 14;
    } else {
      if (a.z.empty()) throw CLI::ValidationError("--z", "required for " + a.quantity);
      const cplx z = checks::parse_complex(a.z);
      j["z"] = checks::format_complex(z);
      if (a.quantity == "g") {
        j["value"] = G.value(z);
        j["digits"] = 13;
      } else if (a.quantity == "sigma") {
        const cplx s = G.sigma().sigma(z);
        j["value"] = complex_json(s);
        if (z != 0.0) j["ratio_to_z"] = complex_json(s / z);
        j["digits"] = 13;
      } else if (a.quantity == "phi") {
        if (a.z0.empty() || a.N < 1) throw CLI::ValidationError("--z0/--N", "phi needs --z0 and --N");
        const cplx z0 = checks::parse_complex(a.z0);
        const TranslationUnit T(G, z0, a.N);
        j["z0"] = checks::format_complex(z0);
        j["N"] = a.N;
        j["value"] = complex_json(T.value(z));
        j["log_abs"] = T.log_abs(z);
        j["digits"] = 12;
      }
    }
  } catch (const SingularInput& e) {
    return signal_exit("SingularInput", e.what(), j);
  } catch (const PoleSignal& e) {
    return signal_exit("PoleSignal", e.what(), j);
  } catch (const ZeroSignal& e) {
    return signal_exit("ZeroSignal", e.what(), j);
  }
  std::cout << j.dump() << "\n";
  return 0;
}

struct CheckArgs {
  std::string name;
  std::string tau;
  std::string format = "jsonl";
  std::string output;
  checks::RunConfig cfg;
  int N = 0, a = 0, g = -1, n = -1, gA = 0, gB = 0, samples = 0;
};

int run_checks(CheckArgs c) {
  checks::RunConfig& cfg = c.cfg;
  if (!c.tau.empty()) cfg.tau = checks::parse_complex(c.tau);
  if (c.N > 0) cfg.N = c.N;
  if (c.a > 0) cfg.a = c.a;
  if (c.g >= 1) cfg.g = c.g;
  if (c.n >= 0) cfg.n = c.n;
  if (c.gA > 0) cfg.gA = c.gA;
  if (c.gB > 0) cfg.gB = c.gB;
  if (c.samples > 0) cfg.samples = c.samples;

  Sink sink;
  sink.open(c.output, "check-" + c.name + (c.format == "csv" ? ".csv" : ".jsonl"));
  if (c.format == "csv") *sink.out << checks::CheckReport::csv_header() << "\n";
  bool all = true;
  for (const std::string& name : checks::expand(c.name)) {
    const checks::CheckReport r = checks::run_check(name, cfg);
    all = all && r.pass;
    if (c.format == "csv")
      *sink.out << r.csv_row() << "\n";
    else
      *sink.out << r.to_json().dump() << "\n";
    sink.out->flush();
  }
  return all ? 0 : 1;
}

struct TableArgs {
  std::string tau = "i";
  std::string grid = "10x10";
  std::string output;
  double margin = 0.0;
  double radius = GreenEvaluator::kDefaultSingularRadius;
};

int run_table(const TableArgs& t) {
  int rows = 0, cols = 0;
  char x = 0, extra = 0;
  if (std::sscanf(t.grid.c_str(), "%d%c%d%c", &rows, &x, &cols, &extra) != 3 || (x != 'x' && x != 'X') || rows < 1 ||
      cols < 1)
    throw CLI::ValidationError("--grid", "expected RxC with positive R and C, got '" + t.grid + "'");
  if (t.margin < 0 || t.margin >= 0.5) throw CLI::ValidationError("--margin", "must lie in [0, 0.5)");
  const GreenEvaluator G(Lattice::from_tau(checks::parse_complex(t.tau)), t.radius);
  Sink sink;
  sink.open(t.output, "table.csv");
  std::ostream& os = *sink.out;
  os << "re_z,im_z,g\n";
  const double span = 1.0 - 2.0 * t.margin;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      const double s = t.margin + span * (j + 0.5) / cols;
      const double u = t.margin + span * (i + 0.5) / rows;
      const cplx z = G.host().point(s, u);
      os << num(z.real()) << ',' << num(z.imag()) << ',';
      if (G.is_singular(z))
        os << "singular\n";
      else
        os << num(G.value(z)) << "\n";
    }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Canonical Green currents on elliptic curves: evaluation, verification suites and tables.\n" +
               std::string(kComplexGrammar)};
  app.require_subcommand(1);
  app.set_version_flag("--version", checks::kEngineVersion);

  EvalArgs ea;
  CLI::App* eval = app.add_subcommand("eval", "Evaluate g, sigma, phi or the quasi-periods");
  eval->add_option("quantity", ea.quantity, "g | sigma | phi | eta")
      ->required()
      ->check(CLI::IsMember({"g", "sigma", "phi", "eta"}));
  eval->add_option("--tau", ea.tau, "Period ratio (default i)");
  eval->add_option("--z", ea.z, "Evaluation point");
  eval->add_option("--z0", ea.z0, "Torsion point for phi");
  eval->add_option("--N", ea.N, "Order of z0 for phi");
  eval->add_option("--radius", ea.radius, "Exclusion radius around singular points")->check(CLI::PositiveNumber);

  CheckArgs ca;
  CLI::App* check = app.add_subcommand("check", "Run verification suites; exit status 0 iff every report passes");
  check->add_option("suite", ca.name, "legendre | periodicity | pushforward | distribution | robert | theorem | "
                                      "product-formula | cohomology | all")
      ->required()
      ->check(CLI::IsMember(checks::subcommands()));
  check->add_option("--tau", ca.tau, "Restrict numeric suites to one lattice");
  check->add_option("--N", ca.N, "Level N (or isogeny degree n)")->check(CLI::PositiveNumber);
  check->add_option("--a", ca.a, "Trace / division parameter a")->check(CLI::PositiveNumber);
  check->add_option("--g", ca.g, "Torus dimension for cohomology")->check(CLI::Range(1, 2));
  check->add_option("--n", ca.n, "Logarithm level for cohomology")->check(CLI::NonNegativeNumber);
  check->add_option("--gA", ca.gA, "Relative dimension of A")->check(CLI::Range(1, 3));
  check->add_option("--gB", ca.gB, "Relative dimension of B")->check(CLI::Range(1, 3));
  check->add_option("--samples", ca.samples, "Sample count")->check(CLI::PositiveNumber);
  check->add_option("--seed", ca.cfg.seed, "Master seed");
  check->add_option("--eps", ca.cfg.target_eps, "Series truncation target")->check(CLI::PositiveNumber);
  check->add_option("--radius", ca.cfg.singular_radius, "Exclusion radius")->check(CLI::PositiveNumber);
  check->add_option("--budget", ca.cfg.budget, "Cap on the total rank of cochain complexes");
  check->add_option("--tol-legendre", ca.cfg.tol.legendre)->check(CLI::PositiveNumber);
  check->add_option("--tol-periodicity", ca.cfg.tol.periodicity)->check(CLI::PositiveNumber);
  check->add_option("--tol-automorphy", ca.cfg.tol.automorphy)->check(CLI::PositiveNumber);
  check->add_option("--tol-pushforward", ca.cfg.tol.pushforward)->check(CLI::PositiveNumber);
  check->add_option("--tol-distribution", ca.cfg.tol.distribution)->check(CLI::PositiveNumber);
  check->add_option("--tol-robert", ca.cfg.tol.robert)->check(CLI::PositiveNumber);
  check->add_option("--tol-theorem", ca.cfg.tol.theorem)->check(CLI::PositiveNumber);
  check->add_option("--format", ca.format, "jsonl | csv")->check(CLI::IsMember({"jsonl", "csv"}));
  check->add_option("-o,--output", ca.output, std::string("Report file (default $") + kOutputEnv + " or stdout)");
  check->add_flag("--timing", ca.cfg.timing, "Record wall-clock runtime_ms (otherwise 0, keeping reports reproducible)");

  TableArgs ta;
  CLI::App* table = app.add_subcommand("table", "Tabulate g over the fundamental parallelogram");
  table->add_option("--tau", ta.tau, "Period ratio (default i)");
  table->add_option("--grid", ta.grid, "Rows x columns, e.g. 10x10");
  table->add_option("--margin", ta.margin, "Margin in lattice coordinates, in [0, 0.5)");
  table->add_option("--radius", ta.radius, "Exclusion radius")->check(CLI::PositiveNumber);
  table->add_option("-o,--output", ta.output, std::string("CSV file (default $") + kOutputEnv + "/table.csv or stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*eval) return run_eval(ea);
    if (*check) return run_checks(ca);
    if (*table) return run_table(ta);
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n" << app.help();
    return 64;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 64;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
