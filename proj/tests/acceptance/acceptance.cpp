// One PASS/FAIL line per acceptance criterion, with residual, tolerance and wall time.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "polylab/checks.hpp"

using namespace polylab::checks;

namespace {

struct Criterion {
  int id;
  const char* title;
  std::vector<std::string> checks;
  double limit_s;  // 0: no time bound
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "Legendre relation on 20 random reduced lattices", {"legendre"}, 1},
      {2, "sigma quasi-periodicity, 20 lattices x 20 points x 3 periods", {"periodicity"}, 1},
      {3, "pushforward invariance, n in {2,3}, three lattices", {"pushforward"}, 5},
      {4, "distribution relation, N in {2,3,5}", {"distribution"}, 10},
      {5, "g(Nz) - N^2 g(z) = -2 sum log|phi|, 100 points, N in {2,3}, two lattices", {"theorem"}, 10},
      {6, "automorphy factors are N-th roots of unity; alpha(omega1, omega2/N) = exp(-2 pi i/N)", {"automorphy"}, 0},
      {7, "Robert distribution relation, (N,a) in {(2,3),(3,4),(5,6)}", {"robert"}, 10},
      {8, "symbolic product formula, normal forms on a 200-term corpus", {"product-formula"}, 5},
      {9, "logarithm sheaf cohomology, transitions, punctured sequence, polylog classes", {"cohomology"}, 60},
      {10, "trace eigenspaces, weight decomposition, norm compatibility", {"trace-eigenspaces"}, 30},
  };
  const RunConfig cfg;
  int failed = 0;
  for (const auto& c : criteria) {
    bool pass = true;
    double worst = 0, tol = 0;
    const auto t0 = std::chrono::steady_clock::now();
    std::string reason;
    for (const auto& name : c.checks) {
      const CheckReport r = run_check(name, cfg);
      pass = pass && r.pass;
      worst = std::max(worst, r.max_abs_residual);
      const auto& t = r.params["tolerance"];
      if (t.is_number()) tol = t.get<double>();
      if (!r.reason.empty()) reason += (reason.empty() ? "" : "; ") + r.reason;
    }
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = c.limit_s <= 0 || ms < c.limit_s * 1000;
    if (!in_time) reason += (reason.empty() ? "" : "; ") + std::string("time limit exceeded");
    const bool ok = pass && in_time;
    failed += !ok;
    char limit[32] = "none";
    if (c.limit_s > 0) std::snprintf(limit, sizeof limit, "%.0f s", c.limit_s);
    if (tol > 0)
      std::printf("%s criterion %2d: %s | max residual %.3e < %.0e | %.1f ms (limit %s)", ok ? "PASS" : "FAIL", c.id,
                  c.title, worst, tol, ms, limit);
    else
      std::printf("%s criterion %2d: %s | failed assertions %.0f | %.1f ms (limit %s)", ok ? "PASS" : "FAIL", c.id,
                  c.title, worst, ms, limit);
    if (!reason.empty()) std::printf(" | %s", reason.c_str());
    std::printf("\n");
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed ? 1 : 0;
}
