#include <algorithm>
#include <random>
#include <set>

#include "polylab/current_calculus.hpp"

namespace polylab::currents {

GreenLemma::GreenLemma(int gA, int gB, bool tau_is_zero)
    : A(atomic_space("A", gA)),
      B(atomic_space("B", gB)),
      AB(product_space({A, B})),
      sigma(Point::section("sigma")),
      tau(tau_is_zero ? Point() : Point::section("tau")) {}

Term GreenLemma::g_A() const { return pullback(projection(AB, 0), G(A)); }
Term GreenLemma::g_B() const { return pullback(projection(AB, 1), G(B)); }
Term GreenLemma::sigma_g_A() const {
  return pullback(projection(AB, 0), pullback(translation(A, {sigma}), G(A)));
}
Term GreenLemma::tau_g_B() const { return pullback(projection(AB, 1), pullback(translation(B, {tau}), G(B))); }
Term GreenLemma::delta_A0() const { return Delta(AB, {{std::nullopt, Point()}}); }
Term GreenLemma::delta_Atau() const { return Delta(AB, {{std::nullopt, tau}}); }
Term GreenLemma::delta_0B() const { return Delta(AB, {{Point(), std::nullopt}}); }
Term GreenLemma::nu_A() const { return pullback(projection(AB, 0), Nu(A)); }

Term GreenLemma::x() const { return pullback(translation(A, {sigma}), G(A)) - G(A); }
Term GreenLemma::y() const { return pullback(translation(B, {tau}), G(B)) - G(B); }

Term GreenLemma::lhs() const { return pullback(translation(AB, {sigma, tau}), G(AB)) - G(AB); }

Term GreenLemma::star_display() const { return star(sigma_g_A(), tau_g_B()) - star(g_A(), g_B()); }

Term GreenLemma::wedge_display() const {
  const Term sigma_nu = pullback(projection(AB, 0), pullback(translation(A, {sigma}), Nu(A)));
  return sum({{1, wedge({sigma_g_A(), delta_Atau()})},
              {1, wedge({sigma_nu, tau_g_B()})},
              {-1, wedge({g_A(), delta_A0()})},
              {-1, wedge({nu_A(), g_B()})}});
}

Term GreenLemma::first_display() const {
  return wedge({g_A(), delta_A0() - delta_Atau()}) + wedge({tau_g_B() - g_B(), delta_0B() - nu_A()});
}

Term GreenLemma::final_display() const {
  return wedge({sigma_g_A() - g_A(), delta_Atau()}) + wedge({tau_g_B() - g_B(), delta_0B()});
}

Term GreenLemma::pushforward_form() const {
  return pushforward(graph_immersion(AB, 0, {Point(), tau}), x()) +
         pushforward(graph_immersion(AB, 1, {Point(), Point()}), y());
}

DerivationTrace verify_green_lemma(int gA, int gB, bool tau_is_zero) {
  const GreenLemma L(gA, gB, tau_is_zero);
  DerivationTrace left, right;
  const Term nl = normalize(L.lhs(), &left);
  const Term nr = normalize(L.final_display(), &right);
  if (!(nl == nr)) throw DerivationFailure("normal forms of the two sides differ", {nl, nr});
  DerivationTrace out;
  out.steps = left.steps;
  for (auto it = right.steps.rbegin(); it != right.steps.rend(); ++it)
    out.steps.push_back({it->rule, it->after, it->before, true, it->note});
  check_trace(out, L.lhs(), L.final_display());
  out.terminal = true;
  return out;
}

// ---------------------------------------------------------------------------
// Random corpus on A x B, dim A = dim B = 1

namespace {

class CorpusBuilder {
 public:
  explicit CorpusBuilder(std::uint64_t seed) : gen_(seed), L_(1, 1) {
    pa_ = {Point(), L_.sigma, -L_.sigma, 2 * L_.sigma};
    pb_ = {Point(), L_.tau, -L_.tau};
  }

  Term of_degree(int d, int depth) {
    for (;;) {
      try {
        return d == 0 ? deg0(depth) : (d == 1 ? deg1(depth) : deg2(depth));
      } catch (const AdmissibilityError&) {
      } catch (const TypeError&) {
      }
    }
  }

  std::size_t pick(std::size_t n) { return static_cast<std::size_t>(gen_() % n); }
  long long coef() {
    static const long long cs[] = {-3, -2, -1, 1, 1, 2, 3};
    return cs[pick(7)];
  }

 private:
  const Point& pa() { return pa_[pick(pa_.size())]; }
  const Point& pb() { return pb_[pick(pb_.size())]; }

  Term green() {
    const SpacePtr& AB = L_.AB;
    switch (pick(3)) {
      case 0:
        return pullback(projection(AB, 0), pullback(translation(L_.A, {pa()}), G(L_.A)));
      case 1:
        return pullback(projection(AB, 1), pullback(translation(L_.B, {pb()}), G(L_.B)));
      default:
        return pullback(translation(AB, {pa(), pb()}), pullback(projection(AB, pick(2)), G(pick(2) ? L_.B : L_.A)));
    }
  }

  Term deg0(int depth) {
    const std::size_t k = pick(depth > 0 ? 4 : 2);
    if (k < 2) return green();
    if (k == 2) return sum({{coef(), green()}, {coef(), green()}});
    return zero(L_.AB, {0, 0});
  }

  Term deg1_atom() {
    const SpacePtr& AB = L_.AB;
    switch (pick(4)) {
      case 0:
        return Delta(AB, {{pa(), std::nullopt}});
      case 1:
        return Delta(AB, {{std::nullopt, pb()}});
      case 2:
        return pullback(projection(AB, 0), Nu(L_.A));
      default:
        return pullback(translation(AB, {pa(), pb()}), pullback(projection(AB, 1), Nu(L_.B)));
    }
  }

  Term deg1(int depth) {
    const SpacePtr& AB = L_.AB;
    const std::size_t k = pick(depth > 0 ? 9 : 3);
    switch (k) {
      case 0:
      case 1:
        return deg1_atom();
      case 2:
        return ddc(green());
      case 3:
        return wedge({green(), deg1_atom()});
      case 4:
        return star(green(), green());
      case 5: {
        const Term base = pullback(translation(L_.A, {pa()}), G(L_.A));
        const Term x = pick(2) ? base : base - G(L_.A);
        return pushforward(graph_immersion(AB, 0, {Point(), pb()}), x);
      }
      case 6:
        return pullback(translation(AB, {pa(), pb()}), deg1(depth - 1));
      case 7:
        return sum({{coef(), deg1(depth - 1)}, {coef(), deg1(depth - 1)}});
      case 8:
        return ddc(deg0(depth - 1));
      default:
        return zero(AB, {1, 1});
    }
  }

  Term deg2(int depth) {
    const SpacePtr& AB = L_.AB;
    switch (pick(depth > 0 ? 6 : 3)) {
      case 0:
        return wedge({deg1_atom(), deg1_atom()});
      case 1:
        return Delta(AB, {{pa(), pb()}});
      case 2:
        return pushforward(graph_immersion(AB, 0, {Point(), pb()}), Nu(L_.A));
      case 3:
        return wedge({deg1_atom(), deg1(depth - 1)});
      case 4:
        return pullback(translation(AB, {pa(), pb()}), deg2(depth - 1));
      default:
        return sum({{coef(), deg2(depth - 1)}, {coef(), deg2(depth - 1)}});
    }
  }

  std::mt19937_64 gen_;
  GreenLemma L_;
  std::vector<Point> pa_, pb_;
};

std::set<std::string> green_atoms(const Term& nf) {
  std::set<std::string> out;
  std::vector<Term> ms;
  if (nf.kind() == Kind::Sum)
    ms = nf.children();
  else if (!nf.is_zero())
    ms = {nf};
  for (const auto& m : ms) {
    const std::vector<Term> parts = m.kind() == Kind::Wedge ? m.children() : std::vector<Term>{m};
    for (const auto& a : parts)
      if (a.green_like()) out.insert(a.sexpr());
  }
  return out;
}

}  // namespace

std::vector<Term> random_corpus(std::uint64_t seed, std::size_t count) {
  CorpusBuilder b(seed);
  std::vector<Term> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(b.of_degree(static_cast<int>(b.pick(3)), 3));
  return out;
}

std::vector<Term> equivalent_variants(const Term& t, std::uint64_t seed, std::size_t count) {
  std::mt19937_64 gen(seed);
  const Term nf = directed_normal_form(t);
  const std::set<std::string> universe = green_atoms(nf);
  const std::vector<R3Relation> rels = r3_relations(nf);
  std::vector<Term> out;
  out.push_back(nf);
  out.push_back(sum({{2, t}, {-1, t}}));
  out.push_back(t + zero(t.space(), t.bidegree()));
  if (t.space()->atomic_count() > 0) {
    std::vector<Point> none(t.space()->atomic_count());
    out.push_back(pullback(translation(t.space(), none), t));
  }
  for (std::size_t tries = 0; out.size() < count && tries < 8 * count && !rels.empty(); ++tries) {
    const R3Relation& r = rels[gen() % rels.size()];
    const long long c = static_cast<long long>(gen() % 5) - 2;
    if (c == 0) continue;
    const Term rel = wedge({r.eta, ddc(r.omega)}) - wedge({ddc(r.eta), r.omega});
    const Term v = t + Integer(c) * rel;
    if (green_atoms(directed_normal_form(v)) != universe) continue;
    out.push_back(v);
  }
  if (out.size() > count) out.resize(count);
  return out;
}

}  // namespace polylab::currents
