#include <algorithm>
#include <atomic>
#include <map>
#include <set>
#include <sstream>

#include "polylab/current_calculus.hpp"
#include "polylab/smith.hpp"

namespace polylab::currents {

namespace {

std::atomic<std::uint64_t> g_r3_applications{0};
std::atomic<std::uint64_t> g_r3_violations{0};

Term nu_form(const Term& t) {
  if (t.kind() == Kind::G) return Nu(t.space());
  return pullback(t.map(), nu_form(t.children()[0]));
}

bool closed_base(const Term& t) {
  const Term* cur = &t;
  while (cur->kind() == Kind::Pullback) cur = &cur->children()[0];
  return cur->kind() == Kind::Nu || cur->kind() == Kind::Delta || cur->kind() == Kind::DDC;
}

std::optional<Term> fibre_product(const Term& t) {
  if (t.kind() != Kind::G || t.space()->atomic() || t.space()->factors.size() != 2) return std::nullopt;
  const SpacePtr& X = t.space();
  return star(pullback(projection(X, 0), G(X->factors[0])), pullback(projection(X, 1), G(X->factors[1])));
}

std::optional<Term> pullback_distribution(const Term& t) {
  if (t.kind() != Kind::Pullback) return std::nullopt;
  const Map& f = t.map();
  const Term& c = t.children()[0];
  if (f.is_identity()) return c;
  switch (c.kind()) {
    case Kind::Sum: {
      std::vector<std::pair<Integer, Term>> terms;
      for (std::size_t i = 0; i < c.children().size(); ++i)
        terms.emplace_back(c.coefficients()[i], pullback(f, c.children()[i]));
      return sum(terms);
    }
    case Kind::Wedge: {
      std::vector<Term> ch;
      for (const auto& u : c.children()) ch.push_back(pullback(f, u));
      return wedge(ch);
    }
    case Kind::Star:
      return star(pullback(f, c.children()[0]), pullback(f, c.children()[1]));
    case Kind::Delta:
      return Delta(f.source, t.wavefront().at(0));
    case Kind::Pullback: {
      if (f.kind != Map::Kind::Translation) return std::nullopt;
      const Map& g = c.map();
      const Term& inner = c.children()[0];
      if (g.kind == Map::Kind::Projection) {
        const Map s = translation(g.target, {f.shift[g.factor]});
        return pullback(g, s.is_identity() ? inner : pullback(s, inner));
      }
      std::vector<Point> shift = f.shift;
      for (std::size_t k = 0; k < shift.size(); ++k) shift[k] = shift[k] + g.shift[k];
      return pullback(translation(f.source, shift), inner);
    }
    default:
      return std::nullopt;
  }
}

std::optional<Term> star_expansion(const Term& t) {
  if (t.kind() != Kind::Star) return std::nullopt;
  const Term& l = t.children()[0];
  const Term& r = t.children()[1];
  if (!l.green_like() || !r.green_like()) return std::nullopt;
  return wedge({l, Delta(t.space(), r.wavefront().at(0))}) + wedge({nu_form(l), r});
}

std::optional<Term> nu_invariance(const Term& t) {
  if (t.kind() != Kind::Pullback || t.map().kind != Map::Kind::Translation) return std::nullopt;
  if (t.children()[0].kind() != Kind::Nu) return std::nullopt;
  return t.children()[0];
}

std::optional<Term> pushforward_expansion(const Term& t) {
  if (t.kind() != Kind::Pushforward) return std::nullopt;
  const Immersion& i = t.immersion();
  return wedge({pullback(projection(i.target, i.factor), t.children()[0]), Delta(i.target, i.image)});
}

std::optional<Term> ddc_linearity(const Term& t) {
  if (t.kind() != Kind::DDC) return std::nullopt;
  const Term& c = t.children()[0];
  if (closed_base(c)) return zero(t.space(), t.bidegree());
  if (c.kind() == Kind::Sum) {
    std::vector<std::pair<Integer, Term>> terms;
    for (std::size_t i = 0; i < c.children().size(); ++i) terms.emplace_back(c.coefficients()[i], ddc(c.children()[i]));
    return sum(terms);
  }
  if (c.kind() == Kind::Pullback) {
    const Term& inner = c.children()[0];
    const Bidegree d = inner.bidegree() + Bidegree{1, 1};
    if (d.p > inner.space()->relative_dimension) return zero(t.space(), t.bidegree());
    return pullback(c.map(), ddc(inner));
  }
  return std::nullopt;
}

std::optional<Term> green_equation(const Term& t) {
  if (t.kind() != Kind::DDC) return std::nullopt;
  const Term& c = t.children()[0];
  if (c.kind() != Kind::G || !c.space()->atomic()) return std::nullopt;
  return Delta(c.space(), Subvariety::zero_section(*c.space())) - Nu(c.space());
}

Term replace_child(const Term& t, std::size_t i, const Term& c) {
  switch (t.kind()) {
    case Kind::Pullback:
      return pullback(t.map(), c);
    case Kind::Pushforward:
      return pushforward(t.immersion(), c);
    case Kind::DDC:
      return ddc(c);
    case Kind::Star:
      return i == 0 ? star(c, t.children()[1]) : star(t.children()[0], c);
    case Kind::Wedge: {
      std::vector<Term> ch = t.children();
      ch[i] = c;
      return wedge(ch);
    }
    case Kind::Sum: {
      std::vector<std::pair<Integer, Term>> terms;
      for (std::size_t k = 0; k < t.children().size(); ++k)
        terms.emplace_back(t.coefficients()[k], k == i ? c : t.children()[k]);
      return sum(terms);
    }
    default:
      throw std::logic_error("replace_child on a leaf");
  }
}

// Leftmost-innermost redex of one rule.
std::optional<Term> rewrite_innermost(const Term& t, const Rule& r) {
  for (std::size_t i = 0; i < t.children().size(); ++i)
    if (auto c = rewrite_innermost(t.children()[i], r)) return replace_child(t, i, *c);
  return r.apply(t);
}

std::vector<std::pair<Integer, Term>> monomials(const Term& t) {
  if (t.is_zero()) return {};
  if (t.kind() == Kind::Sum) {
    std::vector<std::pair<Integer, Term>> out;
    for (std::size_t i = 0; i < t.children().size(); ++i) out.emplace_back(t.coefficients()[i], t.children()[i]);
    return out;
  }
  return {{Integer(1), t}};
}

bool tags_overlap(const Term& a, const Term& b) {
  for (const auto& x : a.wavefront())
    for (const auto& y : b.wavefront())
      if (wavefront_overlap(x, y)) return true;
  return false;
}

}  // namespace

RuleSet register_rules() {
  return {
      {"FP", "G(X x Y) -> q_X^* G(X) * q_Y^* G(Y)", fibre_product},
      {"R4", "pullback distributes over sums, wedges, stars; translations commute past projections", pullback_distribution},
      {"R2", "g1 * g2 -> g1 ^ Delta(div g2) + nu(g1) ^ g2", star_expansion},
      {"R5", "s^* Nu(X) -> Nu(X)", nu_invariance},
      {"PF", "i_* t -> q^* t ^ Delta(image i)", pushforward_expansion},
      {"ddc-lin", "ddc is linear, commutes with pullback, kills closed forms", ddc_linearity},
      {"R1", "ddc G(X) -> Delta(zero section) - Nu(X)", green_equation},
  };
}

const RuleSet& default_rules() {
  static const RuleSet rules = register_rules();
  return rules;
}

std::string DerivationTrace::to_text() const {
  std::ostringstream os;
  if (steps.empty()) return "";
  os << "0\tstart\t" << steps.front().before.sexpr() << "\n";
  for (std::size_t i = 0; i < steps.size(); ++i)
    os << (i + 1) << "\t" << steps[i].rule << (steps[i].reversed ? ":rev" : "") << "\t" << steps[i].after.sexpr()
       << "\n";
  return os.str();
}

Term directed_normal_form(const Term& t, DerivationTrace* trace, NormalizeOptions opts) {
  const RuleSet& rules = default_rules();
  Term cur = canonicalize(t);
  if (trace && !(cur == t)) trace->steps.push_back({"ac", t, cur, false, ""});
  std::size_t steps = 0;
  for (;;) {
    bool fired = false;
    for (const auto& rule : rules) {
      auto r = rewrite_innermost(cur, rule);
      if (!r) continue;
      Term next = canonicalize(*r);
      if (next == cur) throw std::logic_error("rule " + rule.name + " made no progress on " + cur.sexpr());
      if (next.space()->name != cur.space()->name || next.bidegree() != cur.bidegree())
        throw TypeError("rule " + rule.name + " changed the type of " + cur.sexpr());
      if (trace) trace->steps.push_back({rule.name, cur, next, false, ""});
      cur = std::move(next);
      fired = true;
      break;
    }
    if (!fired) break;
    if (++steps > opts.step_budget) throw DerivationFailure("step budget exceeded", {cur});
  }
  return cur;
}

std::vector<R3Relation> r3_relations(const Term& nf) {
  std::set<std::string> seen;
  std::vector<Term> atoms;
  for (const auto& [c, m] : monomials(nf)) {
    const std::vector<Term> parts = m.kind() == Kind::Wedge ? m.children() : std::vector<Term>{m};
    for (const auto& a : parts)
      if (a.green_like() && seen.insert(a.sexpr()).second) atoms.push_back(a);
  }
  std::sort(atoms.begin(), atoms.end(), [](const Term& a, const Term& b) { return a.sexpr() < b.sexpr(); });
  std::vector<R3Relation> out;
  const Bidegree target = nf.bidegree();
  for (std::size_t i = 0; i < atoms.size(); ++i)
    for (std::size_t j = i + 1; j < atoms.size(); ++j) {
      const Term& eta = atoms[i];
      const Term& omega = atoms[j];
      if (!same_space(eta.space(), omega.space()) || !same_space(eta.space(), nf.space())) continue;
      if (eta.bidegree() + omega.bidegree() + Bidegree{1, 1} != target) continue;
      if (tags_overlap(eta, omega)) continue;
      Term value = directed_normal_form(wedge({eta, ddc(omega)}) - wedge({ddc(eta), omega}));
      if (value.is_zero()) continue;
      out.push_back({eta, omega, std::move(value)});
    }
  return out;
}

Term normalize(const Term& t, DerivationTrace* trace, NormalizeOptions opts) {
  Term nf = directed_normal_form(t, trace, opts);
  if (trace) trace->terminal = true;
  if (nf.is_zero()) return nf;
  const std::vector<R3Relation> rels = r3_relations(nf);
  if (rels.empty()) return nf;

  std::map<std::string, Term> cols;
  for (const auto& [c, m] : monomials(nf)) cols.emplace(m.sexpr(), m);
  for (const auto& r : rels)
    for (const auto& [c, m] : monomials(r.value)) cols.emplace(m.sexpr(), m);
  std::map<std::string, std::size_t> index;
  std::vector<Term> basis;
  for (const auto& [key, m] : cols) {
    index[key] = basis.size();
    basis.push_back(m);
  }

  IntMatrix R(rels.size(), basis.size());
  for (std::size_t j = 0; j < rels.size(); ++j)
    for (const auto& [c, m] : monomials(rels[j].value)) R(j, index.at(m.sexpr())) = c;
  std::vector<Integer> v(basis.size());
  for (const auto& [c, m] : monomials(nf)) v[index.at(m.sexpr())] = c;

  const HermiteForm H = hermite_normal_form(R);
  std::vector<Integer> q(H.pivots.size());
  for (std::size_t r = 0; r < H.pivots.size(); ++r) {
    const std::size_t c = H.pivots[r];
    q[r] = floor_div(v[c], H.H(r, c));
    if (q[r].is_zero()) continue;
    for (std::size_t k = 0; k < basis.size(); ++k)
      if (!H.H(r, k).is_zero()) v[k].submul(q[r], H.H(r, k));
  }

  Term cur = nf;
  for (std::size_t j = 0; j < rels.size(); ++j) {
    Integer c;
    for (std::size_t r = 0; r < q.size(); ++r)
      if (!q[r].is_zero() && !H.U(r, j).is_zero()) c.addmul(q[r], H.U(r, j));
    if (c.is_zero()) continue;
    ++g_r3_applications;
    if (tags_overlap(rels[j].eta, rels[j].omega)) ++g_r3_violations;
    Term next = canonicalize(sum({{1, cur}, {-c, rels[j].value}}));
    if (trace)
      trace->steps.push_back({"R3", cur, next, false,
                              "eta=" + rels[j].eta.sexpr() + " omega=" + rels[j].omega.sexpr() + " c=" + c.str()});
    cur = std::move(next);
  }

  std::vector<std::pair<Integer, Term>> residue;
  for (std::size_t k = 0; k < basis.size(); ++k)
    if (!v[k].is_zero()) residue.emplace_back(v[k], basis[k]);
  const Term expect = residue.empty() ? zero(nf.space(), nf.bidegree()) : canonicalize(sum(residue));
  if (!(expect == cur)) throw std::logic_error("R3 reduction does not reproduce the Hermite residue");
  return cur;
}

bool equivalent(const Term& a, const Term& b) {
  if (!same_space(a.space(), b.space())) throw TypeError("equivalent: ambient spaces differ");
  if (a.bidegree() != b.bidegree()) throw TypeError("equivalent: bidegrees differ");
  return normalize(a) == normalize(b);
}

std::uint64_t r3_applications() { return g_r3_applications.load(); }
std::uint64_t r3_overlap_violations() { return g_r3_violations.load(); }

void check_trace(const DerivationTrace& trace, const Term& from, const Term& to) {
  if (trace.steps.empty()) {
    if (!(from == to)) throw DerivationFailure("empty trace between distinct terms", {from, to});
    return;
  }
  std::set<std::string> names{"ac", "R3"};
  for (const auto& r : default_rules()) names.insert(r.name);
  if (!(trace.steps.front().before == from)) throw DerivationFailure("trace does not start at the source", {from});
  if (!(trace.steps.back().after == to)) throw DerivationFailure("trace does not end at the target", {to});
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const TraceStep& s = trace.steps[i];
    if (!names.count(s.rule)) throw DerivationFailure("unregistered rule " + s.rule, {s.before});
    if (!same_space(s.before.space(), s.after.space()) || s.before.bidegree() != s.after.bidegree())
      throw DerivationFailure("step " + std::to_string(i + 1) + " changes the type", {s.before, s.after});
    if (i + 1 < trace.steps.size() && !(s.after == trace.steps[i + 1].before))
      throw DerivationFailure("steps " + std::to_string(i + 1) + " and " + std::to_string(i + 2) + " do not connect",
                              {s.after, trace.steps[i + 1].before});
  }
}

}  // namespace polylab::currents
