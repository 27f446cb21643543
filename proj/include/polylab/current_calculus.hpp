#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "polylab/integer.hpp"

namespace polylab::currents {

class TypeError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class AdmissibilityError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// ---------------------------------------------------------------------------
// Spaces, points and subvarieties

struct Space;
using SpacePtr = std::shared_ptr<const Space>;

struct Space {
  std::string name;
  int relative_dimension = 0;
  std::vector<SpacePtr> factors;  // empty for atomic factors

  bool atomic() const { return factors.empty(); }
  std::size_t atomic_count() const { return atomic() ? 1 : factors.size(); }
  // Dimension of the i-th atomic factor.
  int factor_dimension(std::size_t i) const;
};

SpacePtr atomic_space(const std::string& name, int dimension);
// Binary (or longer) fibre product of atomic spaces; dimension is the sum.
SpacePtr product_space(const std::vector<SpacePtr>& factors, const std::string& name = "");
bool same_space(const SpacePtr& a, const SpacePtr& b);

// Formal Z-combination of torsion section symbols; the empty combination is the zero section.
class Point {
 public:
  Point() = default;
  static Point section(const std::string& name);

  bool is_zero() const { return c_.empty(); }
  std::string str() const;

  Point operator+(const Point& o) const;
  Point operator-(const Point& o) const;
  Point operator-() const;
  friend Point operator*(long long k, const Point& p);

  auto operator<=>(const Point&) const = default;

 private:
  std::map<std::string, long long> c_;
};

// One component per atomic factor: a point, or the whole factor.
struct Subvariety {
  std::vector<std::optional<Point>> comps;

  static Subvariety zero_section(const Space& X);
  int codimension(const Space& X) const;
  std::string str() const;
  auto operator<=>(const Subvariety&) const = default;
};

// Conormal labels meet: supports intersect and some factor is cut out by a point in both.
bool wavefront_overlap(const Subvariety& a, const Subvariety& b);

struct Map {
  enum class Kind { Projection, Translation };
  Kind kind = Kind::Translation;
  SpacePtr source, target;
  std::size_t factor = 0;    // projection onto this factor
  std::vector<Point> shift;  // translation, one entry per atomic factor

  bool is_identity() const;
  std::string str() const;
};

Map projection(const SpacePtr& product, std::size_t factor);
Map translation(const SpacePtr& X, std::vector<Point> shift);

// Graph-type immersion of one factor into a product, other factors fixed at points,
// e.g. Id x tau : A -> A x B.
struct Immersion {
  SpacePtr source, target;
  std::size_t factor = 0;
  Subvariety image;

  int codimension() const { return image.codimension(*target); }
  std::string str() const;
};

Immersion graph_immersion(const SpacePtr& product, std::size_t factor, const std::vector<Point>& fixed);

// ---------------------------------------------------------------------------
// Terms

struct Bidegree {
  int p = 0, q = 0;
  Bidegree operator+(const Bidegree& o) const { return {p + o.p, q + o.q}; }
  auto operator<=>(const Bidegree&) const = default;
};

enum class Kind { G, Nu, Delta, Pullback, Pushforward, Wedge, Star, DDC, Sum, Zero };

struct Node;

// Immutable, shared, hash-consing free; equality is equality of the canonical S-expression.
class Term {
 public:
  Term() = default;

  Kind kind() const;
  const SpacePtr& space() const;
  Bidegree bidegree() const;
  const std::vector<Subvariety>& wavefront() const;
  const std::vector<Term>& children() const;
  const std::vector<Integer>& coefficients() const;  // Sum only
  const Map& map() const;                            // Pullback only
  const Immersion& immersion() const;                // Pushforward only
  const Subvariety& subvariety() const;              // Delta only
  const std::string& sexpr() const;

  bool is_zero() const { return kind() == Kind::Zero; }
  // Chain of pullbacks over G of an atomic space.
  bool green_like() const;
  // Chain of pullbacks over G, Nu or Delta.
  bool atom() const;

  friend bool operator==(const Term& a, const Term& b) { return a.sexpr() == b.sexpr(); }
  friend Term operator+(const Term& a, const Term& b);
  friend Term operator-(const Term& a, const Term& b);
  friend Term operator-(const Term& a);
  friend Term operator*(const Integer& k, const Term& t);

 private:
  explicit Term(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  std::shared_ptr<const Node> n_;
  friend Term make_node(Node&&);
};

Term G(const SpacePtr& X);
Term Nu(const SpacePtr& X);
Term Delta(const SpacePtr& X, const Subvariety& Z);
Term pullback(const Map& f, const Term& t);
Term pushforward(const Immersion& i, const Term& t);
Term wedge(const std::vector<Term>& children);
Term star(const Term& left, const Term& right);
Term ddc(const Term& t);
Term sum(const std::vector<std::pair<Integer, Term>>& terms);
Term zero(const SpacePtr& X, Bidegree d);

// Wedge admissibility: children pairwise wavefront-disjoint.
bool admissible(const std::vector<Term>& children);

// Total order used for Wedge factors: (space name, base kind, S-expression).
bool atom_less(const Term& a, const Term& b);

// Flatten, collect and sort sums; flatten and sort wedges; distribute wedge and star over
// sums; propagate Zero.
Term canonicalize(const Term& t);

// ---------------------------------------------------------------------------
// Rules and derivations

struct Rule {
  std::string name;
  std::string description;
  // Rewrites the given node, or returns nothing when the rule does not apply there.
  std::function<std::optional<Term>(const Term&)> apply;
};

using RuleSet = std::vector<Rule>;

// Directed rules in priority order: FP, R4, R2, R5, PF, ddc-lin, R1. R3 acts afterwards as a
// lattice reduction (see normalize).
RuleSet register_rules();
const RuleSet& default_rules();

struct TraceStep {
  std::string rule;
  Term before, after;
  bool reversed = false;
  std::string note;
};

struct DerivationTrace {
  std::vector<TraceStep> steps;
  bool terminal = false;

  // One line per step: "<index>\t<rule>\t<term after>", preceded by "0\tstart\t<initial>".
  std::string to_text() const;
};

class DerivationFailure : public std::runtime_error {
 public:
  DerivationFailure(const std::string& what, std::vector<Term> best)
      : std::runtime_error(what), best_(std::move(best)) {}
  const std::vector<Term>& best_reached() const { return best_; }

 private:
  std::vector<Term> best_;
};

struct NormalizeOptions {
  std::size_t step_budget = 10000;
};

// Fixed point of the directed rules (innermost-first, leftmost, rules by priority).
Term directed_normal_form(const Term& t, DerivationTrace* trace = nullptr, NormalizeOptions opts = {});

// An R3 relation eta ^ ddc(omega) - ddc(eta) ^ omega, already in directed normal form.
struct R3Relation {
  Term eta, omega;
  Term value;
};

// Relations from unordered pairs of Green atoms of t with disjoint wavefront tags whose
// bidegree matches t.
std::vector<R3Relation> r3_relations(const Term& directed_nf);

// Directed normal form, then the canonical coset representative modulo the Z-span of the
// R3 relations (Hermite reduction along the S-expression order of monomials).
Term normalize(const Term& t, DerivationTrace* trace = nullptr, NormalizeOptions opts = {});

bool equivalent(const Term& a, const Term& b);

// Instrumentation: R3 applications so far and how many had overlapping tags.
std::uint64_t r3_applications();
std::uint64_t r3_overlap_violations();

// Checks that consecutive steps connect, that every step preserves space and bidegree and
// names a registered rule. Throws DerivationFailure otherwise.
void check_trace(const DerivationTrace& trace, const Term& from, const Term& to);

// ---------------------------------------------------------------------------
// Product formula for canonical currents on A x B

class GreenLemma {
 public:
  GreenLemma(int gA, int gB, bool tau_is_zero = false);

  SpacePtr A, B, AB;
  Point sigma, tau;

  Term g_A() const;         // q_A^* G(A)
  Term g_B() const;         // q_B^* G(B)
  Term sigma_g_A() const;   // q_A^* sigma^* G(A)
  Term tau_g_B() const;     // q_B^* tau^* G(B)
  Term delta_A0() const;    // Delta(A x 0)
  Term delta_Atau() const;  // Delta(A x tau)
  Term delta_0B() const;    // Delta(0 x B)
  Term nu_A() const;        // q_A^* Nu(A)

  Term x() const;  // sigma^* G(A) - G(A) on A
  Term y() const;  // tau^* G(B) - G(B) on B

  // (sigma x tau)^* G(A x B) - G(A x B)
  Term lhs() const;
  // q_A^* sigma^* g * q_B^* tau^* g - q_A^* g * q_B^* g
  Term star_display() const;
  // The four-wedge expansion (with q_A^* sigma^* Nu(A) kept).
  Term wedge_display() const;
  // q_A^* g ^ (d_{A x 0} - d_{A x tau}) + (q_B^* tau^* g - q_B^* g) ^ (d_{0 x B} - q_A^* nu)
  Term first_display() const;
  // (q_A^* sigma^* g - q_A^* g) ^ d_{A x tau} + (q_B^* tau^* g - q_B^* g) ^ d_{0 x B}
  Term final_display() const;
  // (Id x tau)_* x + (0 x Id)_* y
  Term pushforward_form() const;
};

// Full trace from lhs() to final_display(); throws DerivationFailure when they do not meet.
DerivationTrace verify_green_lemma(int gA, int gB, bool tau_is_zero = false);

// Seeded well-typed random terms on A x B with dim A = dim B = 1.
std::vector<Term> random_corpus(std::uint64_t seed, std::size_t count);

// Terms equivalent to t by construction, built from t's own Green atoms (R3 instances,
// hand-expanded stars, cancelling pairs).
std::vector<Term> equivalent_variants(const Term& t, std::uint64_t seed, std::size_t count);

}  // namespace polylab::currents
