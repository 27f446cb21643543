#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "polylab/matrix.hpp"
#include "polylab/smith.hpp"

namespace polylab::sheaf {

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ResidueInfeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GcdViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Default cap on sum_k rank C^k.
inline constexpr std::size_t kDefaultBudget = 20000;

// Z[Gamma]/I^{n+1}, Gamma = Z^{2g}, on the monomials x^alpha (x_i = t_i - 1), |alpha| <= n,
// ordered by degree then lexicographically.
struct LogModule {
  int g = 1;
  int n = 0;
  std::vector<std::vector<int>> basis;
  std::vector<IntMatrix> T;  // action of t_1 .. t_{2g}
  IntMatrix transition;      // truncation to level n - 1 (0 x rank when n = 0)
  std::vector<Integer> augmentation;

  std::size_t rank() const { return basis.size(); }
  std::size_t index_of(const std::vector<int>& alpha) const;
};

LogModule build_log_module(int g, int n);
// Same as build_log_module(g, 0).
LogModule trivial_module(int g);

// Cubical cell complex of R^{2g}/Z^{2g} at resolution N with coefficients in the local system
// of M. Cells are (w, J), w in (Z/N)^{2g}, J a subset of {0..2g-1}; crossing the boundary of
// the fundamental domain in direction j transports by T_j. N = 1 is the Koszul complex.
struct CochainComplex {
  int g = 1;
  int N = 1;
  std::size_t module_rank = 1;
  std::vector<std::vector<unsigned>> subsets;  // subsets[k]: bitmasks with k elements, increasing
  std::vector<IntMatrix> d;                    // d[k] : C^k -> C^{k+1}

  std::size_t vertices() const;
  std::size_t dim(int k) const { return vertices() * subsets[k].size() * module_rank; }
  std::size_t total_dim() const;
  // Index of the basis vector (w, J, basis element b) in C^{|J|}.
  std::size_t index(std::size_t w, unsigned J, std::size_t b) const;
};

std::size_t complex_size(int g, std::size_t module_rank, int N);
CochainComplex cellular_complex(const LogModule& M, int N, std::size_t budget = kDefaultBudget);

// Presentation of H^k = ker d^k / im d^{k-1}.
struct CohomologyGroup {
  int degree = 0;
  std::size_t free_rank = 0;
  std::vector<Integer> torsion;
  IntMatrix cocycles;         // Z-basis (columns) of ker d^k
  IntMatrix representatives;  // cocycles (columns) of the free generators
  IntMatrix coordinates;      // cocycle -> SNF coordinates; rows [offset, offset + free_rank) are free
  std::vector<Integer> divisors;
  std::size_t offset = 0;

  std::string str() const;
};

struct CohomologyResult {
  int g = 1;
  int N = 1;
  std::size_t module_rank = 1;
  std::vector<CohomologyGroup> H;
  std::vector<std::pair<std::string, IntMatrix>> maps;

  std::int64_t euler_characteristic() const;
  // "H^k free=<r> torsion=[..]" lines, then "map <name> <rows>x<cols> [[..]]" lines.
  std::string report() const;
};

CohomologyResult torus_cohomology(const LogModule& M, int N = 1, std::size_t budget = kDefaultBudget);

// Matrix of a chain map on free parts of cohomology.
IntMatrix induced_map(const CohomologyGroup& src, const CohomologyGroup& tgt, const IntMatrix& chain_map);
// True when every cocycle of src maps to a coboundary in tgt (exact, including torsion).
bool induces_zero(const CohomologyGroup& src, const CohomologyGroup& tgt, const IntMatrix& chain_map);

// Cochain-level map induced by the coefficient truncation Log^(n) -> Log^(n-1).
IntMatrix transition_chain_map(const CochainComplex& src, const LogModule& M, int k);

struct TransitionCheck {
  int g = 1;
  int n = 1;
  std::vector<bool> zero_below_top;  // degrees 0 .. 2g-1
  IntMatrix top;                     // induced map on H^{2g}
  bool top_isomorphism = false;
};

TransitionCheck check_transition(int g, int n);

// 0 -> H^{2g-1}(X) -> H^{2g-1}(X \ P) -> (+)_{x in P} M_x -> H^{2g}(X) -> 0, with P the centres
// (w + 1/2)/N of the top cells, a translate of X[N]. Stalks are trivialised along the straight
// path from the origin inside the fundamental domain.
struct PuncturedCohomology {
  int g = 1;
  int n = 0;
  int N = 1;
  std::size_t module_rank = 1;
  std::size_t punctures = 1;

  SmithForm lower;  // SNF of d^{2g-2}
  SmithForm upper;  // SNF of d^{2g-1}
  IntMatrix d_lower, d_upper;

  std::size_t torus_free_rank = 0;  // H^{2g-1}(X)
  std::vector<Integer> torus_torsion;
  std::size_t top_free_rank = 0;  // H^{2g}(X)
  std::vector<Integer> top_torsion;
  std::size_t free_rank = 0;  // H^{2g-1}(X \ P)
  std::vector<Integer> torsion;

  IntMatrix residue;     // stalks x free coordinates of H^{2g-1}(X \ P)
  IntMatrix connecting;  // rows: free coordinates of H^{2g}(X), columns: stalks
  bool exact = false;

  std::size_t stalk_dim() const { return punctures * module_rank; }
  std::string report() const;
};

PuncturedCohomology punctured_cohomology(const LogModule& M, int N, std::size_t budget = kDefaultBudget);

struct PolylogClass {
  std::vector<Integer> stalks;       // prescribed residue
  std::vector<Integer> cochain;      // z in C^{2g-1} with d z = stalks
  std::vector<Integer> coordinates;  // free coordinates of [z] in H^{2g-1}(X \ P)
};

// phi: one integer per puncture other than w = 0; the stalk at x is phi_x times the unit,
// the stalk at 0 is minus their sum.
PolylogClass polylog_class(const PuncturedCohomology& P, const std::vector<Integer>& phi);
// Preimage of an arbitrary stalk vector; throws ResidueInfeasible when none exists.
PolylogClass residue_preimage(const PuncturedCohomology& P, const std::vector<Integer>& stalks);

// Trace tr_[a] on C^k with trivial coefficients: e_(w,J) -> sum over off in {0..a-1}^{J^c} of
// e_(a w - off, J).
IntMatrix trace_cochains(int g, int N, long long a, int k);
// Induced operator on H^k (free part).
IntMatrix trace_on_cohomology(const CohomologyResult& R, long long a, int k);
// On the stalk sum: the puncture permutation w -> a w.
IntMatrix trace_on_stalks(const PuncturedCohomology& P, long long a);
// On free coordinates of H^{2g-1}(X \ P); trivial coefficients, gcd(a, N) = 1.
IntMatrix trace_on_punctured(const PuncturedCohomology& P, long long a);

// Basis (columns) of ker (T - a^r)^dim.
RatMatrix weight_eigenspace(const RatMatrix& T, long long a, int r);
// Projector onto the weight-r generalized eigenspace along the sum of the others.
RatMatrix weight_projector(const RatMatrix& T, long long a, int r);
// Multiplicative order of a modulo N.
int multiplicative_order(long long a, int N);

}  // namespace polylab::sheaf
