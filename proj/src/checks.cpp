#include "polylab/checks.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>
#include <tuple>

#include "polylab/canonical_current.hpp"
#include "polylab/current_calculus.hpp"
#include "polylab/elliptic.hpp"
#include "polylab/rational.hpp"
#include "polylab/sampling.hpp"
#include "polylab/sheaf_cohomology.hpp"

namespace polylab::checks {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI(0, 1);

std::string fmt(double v) {
  char buf[40];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// Outcome of a check body: max residual and the tolerance it is held to.
// A tolerance of 0 marks an exact check: residual counts failed assertions.
struct Outcome {
  double residual = 0.0;
  double tolerance = 0.0;
};

std::vector<cplx> default_taus() { return {kI, cplx(0.5, std::sqrt(3.0) / 2), cplx(0.25, 2.0)}; }

std::vector<cplx> taus(const RunConfig& cfg, std::vector<cplx> fallback) {
  return cfg.tau ? std::vector<cplx>{*cfg.tau} : fallback;
}

std::vector<int> ints(const std::optional<int>& v, std::vector<int> fallback) {
  return v ? std::vector<int>{*v} : fallback;
}

json tau_list(const std::vector<cplx>& ts) {
  json out = json::array();
  for (cplx t : ts) out.push_back(format_complex(t));
  return out;
}

GreenEvaluator evaluator(const RunConfig& cfg, const Lattice& L) {
  ThetaOptions opts;
  opts.target_eps = cfg.target_eps;
  return GreenEvaluator(L, cfg.singular_radius, opts);
}

// z with z, N z and every translate z + t, t in E[N], outside the exclusion discs.
cplx safe_point(Sampler& rng, const GreenEvaluator& G, int N) {
  for (;;) {
    const cplx z = rng.lattice_point(G.host());
    bool ok = !G.is_singular(z) && !G.is_singular(static_cast<double>(N) * z);
    for (const auto& t : enumerate_torsion(G.host(), N)) ok = ok && !G.is_singular(z + t.z);
    if (ok) return z;
  }
}

void count(double& failures, bool ok) {
  if (!ok) failures += 1;
}

// ---------------------------------------------------------------------------

Outcome legendre(const RunConfig& cfg, json& p) {
  const int count = cfg.samples.value_or(20);
  const std::uint64_t seed = derive_seed(cfg.seed, "legendre");
  p["seed"] = seed;
  p["samples"] = count;
  std::vector<Lattice> lats;
  if (cfg.tau)
    lats.push_back(Lattice::from_tau(*cfg.tau));
  else
    lats = random_lattices(seed, count);
  p["lattices"] = lats.size();
  double worst = 0.0;
  for (const Lattice& L : lats) {
    const QuasiPeriods Q = quasi_periods(L);
    worst = std::max(worst, std::abs(Q.eta1 * L.omega2() - Q.eta2 * L.omega1() - 2 * kPi * kI));
  }
  return {worst, cfg.tol.legendre};
}

Outcome periodicity(const RunConfig& cfg, json& p) {
  const int count = cfg.samples.value_or(20);
  const std::uint64_t seed = derive_seed(cfg.seed, "periodicity");
  p["seed"] = seed;
  p["samples"] = count;
  std::vector<Lattice> lats;
  if (cfg.tau)
    lats.push_back(Lattice::from_tau(*cfg.tau));
  else
    lats = random_lattices(seed, 20);
  p["lattices"] = lats.size();
  Sampler rng(seed ^ 0x9e3779b97f4a7c15ULL);
  ThetaOptions opts;
  opts.target_eps = cfg.target_eps;
  double worst = 0.0;
  for (const Lattice& L : lats) {
    const QuasiPeriods Q = quasi_periods(L);
    const SigmaEvaluator S(L, Q, opts);
    for (int i = 0; i < count; ++i) {
      cplx z;
      do z = rng.lattice_point(L);
      while (L.lattice_distance(z) < cfg.singular_radius);
      for (cplx w : {L.omega1(), L.omega2(), L.omega1() + L.omega2()}) {
        const cplx lhs = S.sigma(z + w);
        const cplx rhs = -std::exp(Q.eta(w) * (z + w / 2.0)) * S.sigma(z);
        worst = std::max(worst, std::abs(lhs - rhs) / std::abs(lhs));
      }
    }
  }
  return {worst, cfg.tol.periodicity};
}

Outcome automorphy(const RunConfig& cfg, json& p) {
  const std::vector<cplx> ts = taus(cfg, default_taus());
  const std::vector<int> Ns = ints(cfg.N, {2, 3, 5});
  p["tau"] = tau_list(ts);
  p["N"] = Ns;
  double worst = 0.0;
  for (cplx tau : ts) {
    const GreenEvaluator G = evaluator(cfg, Lattice::from_tau(tau));
    const Lattice& L = G.host();
    for (int N : Ns) {
      for (const auto& t : enumerate_torsion(L, N)) {
        if (t.is_zero()) continue;
        const TranslationUnit T = TranslationUnit::from_torsion(G, t);
        for (cplx w : {L.omega1(), L.omega2()})
          worst = std::max(worst, std::abs(std::pow(T.automorphy(w), N) - 1.0));
      }
      if (N > 1) {
        const TranslationUnit T(G, L.omega2() / static_cast<double>(N), N);
        const cplx expected = std::exp(-2 * kPi * kI / static_cast<double>(N));
        worst = std::max(worst, std::abs(T.automorphy(L.omega1()) - expected));
      }
    }
  }
  return {worst, cfg.tol.automorphy};
}

Outcome pushforward(const RunConfig& cfg, json& p) {
  const std::vector<cplx> ts = taus(cfg, default_taus());
  const std::vector<int> ns = ints(cfg.N, {2, 3});
  const int count = cfg.samples.value_or(20);
  const std::uint64_t seed = derive_seed(cfg.seed, "pushforward");
  p["tau"] = tau_list(ts);
  p["n"] = ns;
  p["samples"] = count;
  p["seed"] = seed;
  Sampler rng(seed);
  double worst = 0.0;
  for (cplx tau : ts) {
    const GreenEvaluator G = evaluator(cfg, Lattice::from_tau(tau));
    for (int n : ns) {
      for (int i = 0; i < count; ++i) {
        cplx z;
        for (;;) {
          z = rng.lattice_point(G.host());
          bool ok = !G.is_singular(z);
          for (cplx w : division_preimages(G.host(), z, n)) ok = ok && !G.is_singular(w);
          if (ok) break;
        }
        worst = std::max(worst, pushforward_check(G, n, z));
      }
    }
  }
  return {worst, cfg.tol.pushforward};
}

Outcome distribution(const RunConfig& cfg, json& p) {
  const std::vector<cplx> ts = taus(cfg, default_taus());
  const std::vector<int> Ns = ints(cfg.N, {2, 3, 5});
  const int count = cfg.samples.value_or(20);
  const std::uint64_t seed = derive_seed(cfg.seed, "distribution");
  p["tau"] = tau_list(ts);
  p["N"] = Ns;
  p["samples"] = count;
  p["seed"] = seed;
  Sampler rng(seed);
  double worst = 0.0;
  for (cplx tau : ts) {
    const GreenEvaluator G = evaluator(cfg, Lattice::from_tau(tau));
    for (int N : Ns)
      for (int i = 0; i < count; ++i) worst = std::max(worst, distribution_check(G, N, safe_point(rng, G, N)));
  }
  return {worst, cfg.tol.distribution};
}

Outcome theorem(const RunConfig& cfg, json& p) {
  const std::vector<cplx> ts = taus(cfg, {kI, cplx(0.5, std::sqrt(3.0) / 2)});
  const std::vector<int> Ns = ints(cfg.N, {2, 3});
  const int count = cfg.samples.value_or(100);
  const std::uint64_t seed = derive_seed(cfg.seed, "theorem");
  p["tau"] = tau_list(ts);
  p["N"] = Ns;
  p["samples"] = count;
  p["seed"] = seed;
  Sampler rng(seed);
  double worst = 0.0;
  for (cplx tau : ts) {
    const GreenEvaluator G = evaluator(cfg, Lattice::from_tau(tau));
    for (int N : Ns)
      for (int i = 0; i < count; ++i) worst = std::max(worst, main_theorem_check(G, N, safe_point(rng, G, N)));
  }
  return {worst, cfg.tol.theorem};
}

Outcome robert(const RunConfig& cfg, json& p) {
  const std::vector<cplx> ts = taus(cfg, default_taus());
  std::vector<std::pair<int, int>> pairs{{2, 3}, {3, 4}, {5, 6}};
  if (cfg.N || cfg.a) {
    const int N = cfg.N.value_or(2);
    pairs = {{N, cfg.a.value_or(N + 1)}};
  }
  const int count = cfg.samples.value_or(10);
  const std::uint64_t seed = derive_seed(cfg.seed, "robert");
  p["tau"] = tau_list(ts);
  json np = json::array();
  for (auto [N, a] : pairs) np.push_back({{"N", N}, {"a", a}});
  p["pairs"] = np;
  p["samples"] = count;
  p["seed"] = seed;
  Sampler rng(seed);
  double worst_mod = 0.0, worst_phase = 0.0;
  for (cplx tau : ts) {
    const GreenEvaluator G = evaluator(cfg, Lattice::from_tau(tau));
    const Lattice& L = G.host();
    const double r = cfg.singular_radius;
    for (auto [N, a] : pairs) {
      for (const auto& t : enumerate_torsion(L, N)) {
        if (t.is_zero()) continue;
        const TranslationUnit T = TranslationUnit::from_torsion(G, t);
        std::vector<cplx> zs;
        while (static_cast<int>(zs.size()) < count) {
          const cplx z = rng.lattice_point(L);
          bool ok = L.lattice_distance(z) > r && L.lattice_distance(z - t.z) > r;
          for (cplx w : division_preimages(L, z, a))
            ok = ok && L.lattice_distance(w) > r && L.lattice_distance(w - t.z) > r;
          if (ok) zs.push_back(z);
        }
        const RobertResult res = robert_trace_check(T, a, zs);
        worst_mod = std::max(worst_mod, res.modulus_residual);
        worst_phase = std::max(worst_phase, res.phase_drift);
      }
    }
  }
  p["modulus_residual"] = worst_mod;
  p["phase_drift"] = worst_phase;
  return {std::max(worst_mod, worst_phase), cfg.tol.robert};
}

Outcome product_formula(const RunConfig& cfg, json& p) {
  using namespace currents;
  std::vector<std::pair<int, int>> pairs{{1, 1}, {2, 1}};
  if (cfg.gA || cfg.gB) pairs = {{cfg.gA.value_or(1), cfg.gB.value_or(1)}};
  const int corpus_size = cfg.samples.value_or(200);
  const std::uint64_t seed = derive_seed(cfg.seed, "product-formula");
  double failures = 0;
  json lemmas = json::array();
  for (auto [a, b] : pairs) {
    const GreenLemma L(a, b);
    json entry{{"gA", a}, {"gB", b}};
    try {
      const DerivationTrace tr = verify_green_lemma(a, b);
      entry["trace_steps"] = tr.steps.size();
      count(failures, tr.terminal);
      if (a == 1 && b == 1) count(failures, tr.steps.size() <= 40);
      count(failures, equivalent(L.pushforward_form(), L.final_display()));
    } catch (const DerivationFailure& e) {
      entry["error"] = e.what();
      failures += 1;
    }
    count(failures, normalize(L.first_display()).is_zero());
    lemmas.push_back(entry);
  }
  p["lemmas"] = lemmas;
  p["corpus"] = corpus_size;
  p["seed"] = seed;

  const std::vector<Term> corpus = random_corpus(seed, static_cast<std::size_t>(corpus_size));
  std::vector<Term> nfs;
  for (const auto& t : corpus) {
    const Term n = normalize(t);
    count(failures, normalize(n) == n);
    count(failures, equivalent(t, t));
    nfs.push_back(n);
  }
  for (std::size_t i = 0; i < corpus.size(); ++i)
    for (std::size_t j = i + 1; j < corpus.size(); j += 7)
      if (corpus[i].bidegree() == corpus[j].bidegree())
        count(failures, equivalent(corpus[i], corpus[j]) == equivalent(corpus[j], corpus[i]));
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto vs = equivalent_variants(corpus[i], seed + i, 6);
    for (std::size_t k = 0; k + 1 < vs.size(); ++k) {
      count(failures, equivalent(corpus[i], vs[k]));
      count(failures, equivalent(vs[k], vs[k + 1]));
      count(failures, equivalent(corpus[i], vs[k + 1]));
    }
  }
  return {failures, 0.0};
}

std::vector<std::tuple<int, int, int>> cohomology_configs(const RunConfig& cfg) {
  std::vector<std::tuple<int, int, int>> out{{1, 0, 2}, {1, 1, 2}, {1, 2, 2}, {1, 3, 2},
                                             {1, 2, 3}, {2, 0, 2}, {2, 1, 2}, {2, 2, 2}};
  if (!cfg.g && !cfg.n && !cfg.N) return out;
  std::vector<std::tuple<int, int, int>> sel;
  for (auto [g, n, N] : out) {
    if (cfg.g && *cfg.g != g) continue;
    if (cfg.n && *cfg.n != n) continue;
    sel.emplace_back(g, n, cfg.N.value_or(N));
  }
  if (sel.empty()) sel.emplace_back(cfg.g.value_or(1), cfg.n.value_or(0), cfg.N.value_or(2));
  std::sort(sel.begin(), sel.end());
  sel.erase(std::unique(sel.begin(), sel.end()), sel.end());
  return sel;
}

Outcome cohomology(const RunConfig& cfg, json& p) {
  using namespace sheaf;
  const std::uint64_t seed = derive_seed(cfg.seed, "cohomology");
  Sampler rng(seed);
  double failures = 0;
  json rows = json::array();
  for (auto [g, n, N] : cohomology_configs(cfg)) {
    const LogModule M = build_log_module(g, n);
    const CohomologyResult R = torus_cohomology(M, N, cfg.budget);
    json row{{"g", g}, {"n", n}, {"N", N}, {"module_rank", M.rank()}};
    const auto& top = R.H[2 * g];
    count(failures, top.free_rank == 1 && top.torsion.empty());
    if (n >= 1) {
      const LogModule Lm = build_log_module(g, n - 1);
      const CohomologyResult Rt = torus_cohomology(Lm, N, cfg.budget);
      const CochainComplex C = cellular_complex(M, N, cfg.budget);
      for (int k = 0; k < 2 * g; ++k) count(failures, induces_zero(R.H[k], Rt.H[k], transition_chain_map(C, M, k)));
      const IntMatrix F = induced_map(R.H[2 * g], Rt.H[2 * g], transition_chain_map(C, M, 2 * g));
      count(failures, F.rows() == 1 && F.cols() == 1 && F(0, 0).is_unit());
    }
    const PuncturedCohomology P = punctured_cohomology(M, N, cfg.budget);
    count(failures, P.exact);
    count(failures, verify_smith(P.d_lower, P.lower) && verify_smith(P.d_upper, P.upper));
    std::vector<Integer> phi(P.punctures - 1);
    for (auto& v : phi) v = static_cast<long long>(rng.uniform() * 7) - 3;
    const PolylogClass c = polylog_class(P, phi);
    count(failures, P.d_upper.apply(c.cochain) == c.stalks && P.residue.apply(c.coordinates) == c.stalks);
    std::vector<std::size_t> ranks;
    for (const auto& h : R.H) ranks.push_back(h.free_rank);
    row["torus_free_ranks"] = ranks;
    row["punctured_free_rank"] = P.free_rank;
    row["exact"] = P.exact;
    rows.push_back(row);
  }
  p["configs"] = rows;
  p["seed"] = seed;
  p["budget"] = cfg.budget;
  return {failures, 0.0};
}

long long ipow(long long a, int e) {
  long long r = 1;
  while (e-- > 0) r *= a;
  return r;
}

Outcome traces(const RunConfig& cfg, json& p) {
  using namespace sheaf;
  const std::vector<int> as = ints(cfg.a, {2, 3, 5});
  double failures = 0;
  p["a"] = as;

  // Scalar action on H^k of the torus.
  for (int g : {1, 2})
    for (int N : {1, 2}) {
      const CohomologyResult R = torus_cohomology(trivial_module(g), N, cfg.budget);
      for (long long a : as)
        for (int k = 0; k <= 2 * g; ++k) {
          const IntMatrix T = trace_on_cohomology(R, a, k);
          bool scalar = true;
          for (std::size_t i = 0; i < T.rows(); ++i)
            for (std::size_t j = 0; j < T.cols(); ++j)
              scalar = scalar && T(i, j) == (i == j ? Integer(ipow(a, 2 * g - k)) : Integer(0));
          count(failures, scalar);
        }
    }

  // Weight decomposition of H^1(X \ P) at N = 7 does not depend on a.
  const int Nw = 7;
  const PuncturedCohomology Pw = punctured_cohomology(trivial_module(1), Nw, cfg.budget);
  RatMatrix first0, first1;
  bool have = false;
  for (long long a : {2LL, 3LL, 5LL}) {
    const int ord = multiplicative_order(a, Nw);
    const RatMatrix Tp = power(to_rational(trace_on_punctured(Pw, a)), static_cast<std::size_t>(ord));
    const RatMatrix w0 = weight_projector(Tp, ipow(a, ord), 0);
    const RatMatrix w1 = weight_projector(Tp, ipow(a, ord), 1);
    count(failures, w0 + w1 == RatMatrix::identity(Pw.free_rank));
    count(failures, rank(w0) == static_cast<std::size_t>(Nw * Nw - 1));
    if (have) {
      count(failures, w0 == first0 && w1 == first1);
    } else {
      first0 = w0;
      first1 = w1;
      have = true;
    }
  }

  // Weight 0 for a = 1 mod N, and the residue on it.
  json w0rows = json::array();
  std::vector<std::pair<int, int>> gN{{1, 2}, {1, 3}, {2, 2}};
  if (cfg.N) gN = {{1, *cfg.N}};
  for (auto [g, N] : gN) {
    const PuncturedCohomology P = punctured_cohomology(trivial_module(g), N, cfg.budget);
    const std::size_t expected = static_cast<std::size_t>(ipow(N, 2 * g)) - 1;
    for (long long a : {1LL + N, 1LL + 2 * N}) {
      const IntMatrix T = trace_on_punctured(P, a);
      const RatMatrix K = weight_eigenspace(to_rational(T), a, 0);
      count(failures, K.cols() == expected);
      count(failures, rank(to_rational(P.residue) * K) == expected);
      count(failures, P.residue * T == trace_on_stalks(P, a) * P.residue);
      w0rows.push_back({{"g", g}, {"N", N}, {"a", a}, {"weight0_dim", K.cols()}});
    }
  }
  p["weight0"] = w0rows;

  // tr_[a] pol_phi = pol_[a]phi on weight 0.
  const std::uint64_t seed = derive_seed(cfg.seed, "trace-eigenspaces");
  Sampler rng(seed);
  std::vector<std::pair<int, long long>> pairs{{2, 3}, {3, 2}, {5, 2}, {5, 3}};
  if (cfg.N) {
    pairs.clear();
    for (long long a : as)
      if (std::gcd(a, static_cast<long long>(*cfg.N)) == 1) pairs.emplace_back(*cfg.N, a);
  }
  for (auto [N, a] : pairs) {
    const PuncturedCohomology P = punctured_cohomology(trivial_module(1), N, cfg.budget);
    const IntMatrix T = trace_on_punctured(P, a);
    const IntMatrix S = trace_on_stalks(P, a);
    std::vector<Integer> phi(P.punctures - 1);
    for (auto& v : phi) v = static_cast<long long>(rng.uniform() * 9) - 4;
    const PolylogClass c = polylog_class(P, phi);
    const std::vector<Integer> moved = S.apply(c.stalks);
    const PolylogClass ca = polylog_class(P, std::vector<Integer>(moved.begin() + 1, moved.end()));
    const int ord = multiplicative_order(a, N);
    const RatMatrix W = weight_projector(power(to_rational(T), static_cast<std::size_t>(ord)), ipow(a, ord), 0);
    IntMatrix lhs(P.free_rank, 1), rhs(P.free_rank, 1);
    const std::vector<Integer> tc = T.apply(c.coordinates);
    for (std::size_t i = 0; i < P.free_rank; ++i) {
      lhs(i, 0) = tc[i];
      rhs(i, 0) = ca.coordinates[i];
    }
    count(failures, W * to_rational(lhs) == W * to_rational(rhs));
  }
  p["seed"] = seed;
  return {failures, 0.0};
}

using Body = Outcome (*)(const RunConfig&, json&);

const std::vector<std::pair<std::string, Body>>& registry() {
  static const std::vector<std::pair<std::string, Body>> r{
      {"legendre", legendre},       {"periodicity", periodicity},
      {"automorphy", automorphy},   {"pushforward", pushforward},
      {"distribution", distribution}, {"robert", robert},
      {"theorem", theorem},         {"product-formula", product_formula},
      {"cohomology", cohomology},   {"trace-eigenspaces", traces}};
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------

json CheckReport::to_json() const {
  json j;
  j["check"] = check;
  j["params"] = params;
  if (std::isfinite(max_abs_residual))
    j["max_abs_residual"] = max_abs_residual;
  else
    j["max_abs_residual"] = nullptr;
  j["pass"] = pass;
  j["runtime_ms"] = runtime_ms;
  j["engine_version"] = engine_version;
  if (!reason.empty()) j["reason"] = reason;
  return j;
}

std::string CheckReport::csv_header() { return "check,max_abs_residual,pass,runtime_ms,engine_version,reason,params"; }

std::string CheckReport::csv_row() const {
  std::ostringstream os;
  os << check << ',' << (std::isfinite(max_abs_residual) ? fmt(max_abs_residual) : "nan") << ','
     << (pass ? "true" : "false") << ',' << runtime_ms << ',' << csv_escape(engine_version) << ','
     << csv_escape(reason) << ',' << csv_escape(params.dump());
  return os.str();
}

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> s{"legendre", "periodicity",     "pushforward", "distribution", "robert",
                                          "theorem",  "product-formula", "cohomology",  "all"};
  return s;
}

std::vector<std::string> expand(const std::string& subcommand) {
  if (subcommand == "all") {
    std::vector<std::string> out;
    for (const auto& [name, body] : registry()) out.push_back(name);
    return out;
  }
  if (subcommand == "periodicity") return {"periodicity", "automorphy"};
  if (subcommand == "cohomology") return {"cohomology", "trace-eigenspaces"};
  for (const auto& [name, body] : registry())
    if (name == subcommand) return {name};
  throw std::invalid_argument("unknown check: " + subcommand);
}

CheckReport run_check(const std::string& name, const RunConfig& cfg) {
  Body body = nullptr;
  for (const auto& [n, b] : registry())
    if (n == name) body = b;
  if (!body) throw std::invalid_argument("unknown check: " + name);
  CheckReport r;
  r.check = name;
  r.params["master_seed"] = cfg.seed;
  r.params["target_eps"] = cfg.target_eps;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const Outcome o = body(cfg, r.params);
    r.max_abs_residual = o.residual;
    if (o.tolerance > 0) {
      r.params["tolerance"] = o.tolerance;
      r.pass = o.residual < o.tolerance;
    } else {
      r.params["tolerance"] = nullptr;
      r.pass = o.residual == 0.0;
      if (!r.pass) r.reason = fmt(o.residual) + " assertions failed";
    }
  } catch (const std::exception& e) {
    r.max_abs_residual = std::numeric_limits<double>::quiet_NaN();
    r.pass = false;
    r.reason = e.what();
  }
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0);
  r.runtime_ms = cfg.timing ? ms.count() : 0;
  return r;
}

std::vector<Lattice> random_lattices(std::uint64_t seed, int count) {
  Sampler rng(seed);
  std::vector<Lattice> out;
  while (static_cast<int>(out.size()) < count) {
    const double r = rng.uniform(0.5, 2.0), theta = rng.uniform(-kPi, kPi);
    const cplx w1 = std::polar(r, theta);
    const cplx t(rng.uniform(-2.0, 2.0), rng.uniform(0.3, 2.0));
    try {
      out.push_back(Lattice::reduce(w1, w1 * t).first);
    } catch (const DegenerateLattice&) {
    }
  }
  return out;
}

std::string format_complex(cplx z) {
  const double im = z.imag();
  return fmt(z.real()) + (std::signbit(im) ? "-" : "+") + fmt(std::abs(im)) + "i";
}

cplx parse_complex(const std::string& raw) {
  std::string s;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  const auto bad = [&] { return std::invalid_argument("cannot parse complex number '" + raw + "'"); };
  if (s.empty()) throw bad();
  const auto real = [&](const std::string& t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    std::size_t pos = 0;
    double v;
    try {
      v = std::stod(t, &pos);
    } catch (const std::exception&) {
      throw bad();
    }
    if (pos != t.size()) throw bad();
    return v;
  };
  if (s.back() != 'i') return {real(s), 0.0};
  s.pop_back();
  std::size_t split = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;)
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  if (split == std::string::npos) {
    return {0.0, real(s)};
  }
  return {real(s.substr(0, split)), real(s.substr(split))};
}

}  // namespace polylab::checks
