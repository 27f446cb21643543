#include <algorithm>
#include <map>
#include <sstream>

#include "polylab/current_calculus.hpp"

namespace polylab::currents {

// ---------------------------------------------------------------------------
// Spaces

int Space::factor_dimension(std::size_t i) const {
  if (atomic()) {
    if (i != 0) throw TypeError("factor index out of range for " + name);
    return relative_dimension;
  }
  if (i >= factors.size()) throw TypeError("factor index out of range for " + name);
  return factors[i]->relative_dimension;
}

SpacePtr atomic_space(const std::string& name, int dimension) {
  if (dimension < 1) throw TypeError("relative dimension must be positive");
  if (name.empty() || name.find_first_of(" ()[],") != std::string::npos)
    throw TypeError("invalid space name '" + name + "'");
  return std::make_shared<const Space>(Space{name, dimension, {}});
}

SpacePtr product_space(const std::vector<SpacePtr>& factors, const std::string& name) {
  if (factors.size() < 2) throw TypeError("a product needs at least two factors");
  Space s;
  int dim = 0;
  std::string joined;
  for (const auto& f : factors) {
    if (!f->atomic()) throw TypeError("product factors must be atomic");
    dim += f->relative_dimension;
    joined += (joined.empty() ? "" : "x") + f->name;
  }
  s.name = name.empty() ? joined : name;
  s.relative_dimension = dim;
  s.factors = factors;
  return std::make_shared<const Space>(std::move(s));
}

bool same_space(const SpacePtr& a, const SpacePtr& b) {
  return a == b || (a && b && a->name == b->name && a->relative_dimension == b->relative_dimension &&
                    a->atomic_count() == b->atomic_count());
}

// ---------------------------------------------------------------------------
// Points and subvarieties

Point Point::section(const std::string& name) {
  if (name.empty() || name.find_first_of(" ()[],+-*0123456789") == 0)
    throw TypeError("invalid section name '" + name + "'");
  Point p;
  p.c_[name] = 1;
  return p;
}

std::string Point::str() const {
  if (c_.empty()) return "0";
  std::string out;
  for (const auto& [name, k] : c_) {
    if (k < 0)
      out += "-";
    else if (!out.empty())
      out += "+";
    const long long a = k < 0 ? -k : k;
    if (a != 1) out += std::to_string(a);
    out += name;
  }
  return out;
}

Point Point::operator+(const Point& o) const {
  Point r = *this;
  for (const auto& [name, k] : o.c_) {
    const long long v = (r.c_[name] += k);
    if (v == 0) r.c_.erase(name);
  }
  return r;
}

Point Point::operator-() const {
  Point r = *this;
  for (auto& [name, k] : r.c_) k = -k;
  return r;
}

Point Point::operator-(const Point& o) const { return *this + (-o); }

Point operator*(long long k, const Point& p) {
  Point r;
  if (k == 0) return r;
  r = p;
  for (auto& [name, v] : r.c_) v *= k;
  return r;
}

Subvariety Subvariety::zero_section(const Space& X) {
  Subvariety z;
  z.comps.assign(X.atomic_count(), Point());
  return z;
}

int Subvariety::codimension(const Space& X) const {
  if (comps.size() != X.atomic_count()) throw TypeError("subvariety does not match space " + X.name);
  int c = 0;
  for (std::size_t i = 0; i < comps.size(); ++i)
    if (comps[i]) c += X.factor_dimension(i);
  return c;
}

std::string Subvariety::str() const {
  std::string out = "[";
  for (std::size_t i = 0; i < comps.size(); ++i) {
    if (i) out += ",";
    out += comps[i] ? comps[i]->str() : "*";
  }
  return out + "]";
}

bool wavefront_overlap(const Subvariety& a, const Subvariety& b) {
  if (a.comps.size() != b.comps.size()) return false;
  bool shared_normal = false;
  for (std::size_t i = 0; i < a.comps.size(); ++i) {
    if (a.comps[i] && b.comps[i]) {
      if (*a.comps[i] != *b.comps[i]) return false;
      shared_normal = true;
    }
  }
  return shared_normal;
}

// ---------------------------------------------------------------------------
// Maps

bool Map::is_identity() const {
  if (kind != Kind::Translation) return false;
  return std::all_of(shift.begin(), shift.end(), [](const Point& p) { return p.is_zero(); });
}

std::string Map::str() const {
  if (kind == Kind::Projection) return "(proj " + source->name + " " + std::to_string(factor) + ")";
  std::string out = "(trans " + source->name + " [";
  for (std::size_t i = 0; i < shift.size(); ++i) out += (i ? "," : "") + shift[i].str();
  return out + "])";
}

Map projection(const SpacePtr& product, std::size_t factor) {
  if (product->atomic()) throw TypeError("projection from an atomic space");
  if (factor >= product->factors.size()) throw TypeError("projection index out of range");
  Map m;
  m.kind = Map::Kind::Projection;
  m.source = product;
  m.target = product->factors[factor];
  m.factor = factor;
  return m;
}

Map translation(const SpacePtr& X, std::vector<Point> shift) {
  if (shift.size() != X->atomic_count()) throw TypeError("translation does not match space " + X->name);
  Map m;
  m.kind = Map::Kind::Translation;
  m.source = m.target = X;
  m.shift = std::move(shift);
  return m;
}

std::string Immersion::str() const { return "(imm " + target->name + " " + image.str() + ")"; }

Immersion graph_immersion(const SpacePtr& product, std::size_t factor, const std::vector<Point>& fixed) {
  if (product->atomic()) throw TypeError("immersion target must be a product");
  if (factor >= product->factors.size() || fixed.size() != product->factors.size())
    throw TypeError("immersion data does not match " + product->name);
  Immersion i;
  i.source = product->factors[factor];
  i.target = product;
  i.factor = factor;
  for (std::size_t k = 0; k < fixed.size(); ++k)
    i.image.comps.push_back(k == factor ? std::nullopt : std::optional<Point>(fixed[k]));
  return i;
}

// ---------------------------------------------------------------------------
// Nodes

struct Node {
  Kind kind = Kind::Zero;
  SpacePtr space;
  Bidegree bideg;
  std::vector<Subvariety> wf;
  std::vector<Term> ch;
  std::vector<Integer> coef;
  Map map;
  Immersion imm;
  Subvariety sub;
  std::string sexpr;
};

Term make_node(Node&& n) { return Term(std::make_shared<const Node>(std::move(n))); }

namespace {

const Node& empty_node() {
  static const Node n;
  return n;
}

void check_bidegree(const Space& X, Bidegree d, const char* what) {
  if (d.p < 0 || d.q < 0 || d.p > X.relative_dimension || d.q > X.relative_dimension)
    throw TypeError(std::string(what) + ": bidegree (" + std::to_string(d.p) + "," + std::to_string(d.q) +
                    ") out of range on " + X.name);
}

void normalize_tags(std::vector<Subvariety>& wf) {
  std::sort(wf.begin(), wf.end());
  wf.erase(std::unique(wf.begin(), wf.end()), wf.end());
}

std::vector<Subvariety> union_tags(const std::vector<Term>& ts) {
  std::vector<Subvariety> out;
  for (const auto& t : ts) out.insert(out.end(), t.wavefront().begin(), t.wavefront().end());
  normalize_tags(out);
  return out;
}

Subvariety pull_tag(const Map& f, const Subvariety& Z) {
  Subvariety out;
  if (f.kind == Map::Kind::Projection) {
    out.comps.assign(f.source->atomic_count(), std::nullopt);
    out.comps[f.factor] = Z.comps.at(0);
  } else {
    out = Z;
    for (std::size_t k = 0; k < out.comps.size(); ++k)
      if (out.comps[k]) out.comps[k] = *out.comps[k] + f.shift[k];
  }
  return out;
}

Subvariety push_tag(const Immersion& i, const Subvariety& Z) {
  Subvariety out = i.image;
  out.comps[i.factor] = Z.comps.at(0);
  return out;
}

std::string join_sexpr(const std::string& head, const std::vector<Term>& ch) {
  std::string out = "(" + head;
  for (const auto& c : ch) out += " " + c.sexpr();
  return out + ")";
}

void same_type_children(const std::vector<Term>& ch, const char* what, bool same_bidegree) {
  if (ch.empty()) throw TypeError(std::string(what) + " needs at least one child");
  for (const auto& c : ch) {
    if (!same_space(c.space(), ch[0].space()))
      throw TypeError(std::string(what) + ": ambient spaces differ (" + c.space()->name + " vs " +
                      ch[0].space()->name + ")");
    if (same_bidegree && c.bidegree() != ch[0].bidegree())
      throw TypeError(std::string(what) + ": bidegrees differ");
  }
}

int kind_rank(const Term& t) {
  const Term* cur = &t;
  while (cur->kind() == Kind::Pullback) cur = &cur->children()[0];
  return static_cast<int>(cur->kind());
}

}  // namespace

Kind Term::kind() const { return n_ ? n_->kind : Kind::Zero; }
const SpacePtr& Term::space() const { return n_ ? n_->space : empty_node().space; }
Bidegree Term::bidegree() const { return n_ ? n_->bideg : Bidegree{}; }
const std::vector<Subvariety>& Term::wavefront() const { return n_ ? n_->wf : empty_node().wf; }
const std::vector<Term>& Term::children() const { return n_ ? n_->ch : empty_node().ch; }
const std::vector<Integer>& Term::coefficients() const { return n_ ? n_->coef : empty_node().coef; }
const Map& Term::map() const { return n_ ? n_->map : empty_node().map; }
const Immersion& Term::immersion() const { return n_ ? n_->imm : empty_node().imm; }
const Subvariety& Term::subvariety() const { return n_ ? n_->sub : empty_node().sub; }
const std::string& Term::sexpr() const { return n_ ? n_->sexpr : empty_node().sexpr; }

bool Term::green_like() const {
  if (kind() == Kind::G) return space()->atomic();
  return kind() == Kind::Pullback && children()[0].green_like();
}

bool Term::atom() const {
  switch (kind()) {
    case Kind::G:
    case Kind::Nu:
    case Kind::Delta:
      return true;
    case Kind::Pullback:
      return children()[0].atom();
    default:
      return false;
  }
}

Term G(const SpacePtr& X) {
  Node n;
  n.kind = Kind::G;
  n.space = X;
  n.bideg = {X->relative_dimension - 1, X->relative_dimension - 1};
  n.wf = {Subvariety::zero_section(*X)};
  n.sexpr = "(G " + X->name + ")";
  return make_node(std::move(n));
}

Term Nu(const SpacePtr& X) {
  Node n;
  n.kind = Kind::Nu;
  n.space = X;
  n.bideg = {X->relative_dimension, X->relative_dimension};
  n.sexpr = "(Nu " + X->name + ")";
  return make_node(std::move(n));
}

Term Delta(const SpacePtr& X, const Subvariety& Z) {
  const int c = Z.codimension(*X);
  Node n;
  n.kind = Kind::Delta;
  n.space = X;
  n.bideg = {c, c};
  n.sub = Z;
  n.wf = {Z};
  n.sexpr = "(Delta " + X->name + " " + Z.str() + ")";
  return make_node(std::move(n));
}

Term pullback(const Map& f, const Term& t) {
  if (!same_space(t.space(), f.target))
    throw TypeError("pullback along " + f.str() + " of a term on " + t.space()->name);
  Node n;
  n.kind = Kind::Pullback;
  n.space = f.source;
  n.bideg = t.bidegree();
  check_bidegree(*n.space, n.bideg, "pullback");
  for (const auto& Z : t.wavefront()) n.wf.push_back(pull_tag(f, Z));
  normalize_tags(n.wf);
  n.map = f;
  n.ch = {t};
  n.sexpr = "(pull " + f.str() + " " + t.sexpr() + ")";
  return make_node(std::move(n));
}

Term pushforward(const Immersion& i, const Term& t) {
  if (!same_space(t.space(), i.source))
    throw TypeError("pushforward along " + i.str() + " of a term on " + t.space()->name);
  const int c = i.codimension();
  Node n;
  n.kind = Kind::Pushforward;
  n.space = i.target;
  n.bideg = t.bidegree() + Bidegree{c, c};
  check_bidegree(*n.space, n.bideg, "pushforward");
  for (const auto& Z : t.wavefront()) n.wf.push_back(push_tag(i, Z));
  n.wf.push_back(i.image);
  normalize_tags(n.wf);
  n.imm = i;
  n.ch = {t};
  n.sexpr = "(push " + i.str() + " " + t.sexpr() + ")";
  return make_node(std::move(n));
}

bool admissible(const std::vector<Term>& children) {
  for (std::size_t a = 0; a < children.size(); ++a)
    for (std::size_t b = a + 1; b < children.size(); ++b)
      for (const auto& x : children[a].wavefront())
        for (const auto& y : children[b].wavefront())
          if (wavefront_overlap(x, y)) return false;
  return true;
}

Term wedge(const std::vector<Term>& children) {
  same_type_children(children, "wedge", false);
  if (!admissible(children)) throw AdmissibilityError("wedge factors have clashing wavefront tags: " +
                                                      join_sexpr("wedge", children));
  Node n;
  n.kind = Kind::Wedge;
  n.space = children[0].space();
  for (const auto& c : children) n.bideg = n.bideg + c.bidegree();
  check_bidegree(*n.space, n.bideg, "wedge");
  n.wf = union_tags(children);
  n.ch = children;
  n.sexpr = join_sexpr("wedge", children);
  return make_node(std::move(n));
}

Term star(const Term& left, const Term& right) {
  same_type_children({left, right}, "star", false);
  if (!admissible({left, right}))
    throw AdmissibilityError("star factors have clashing wavefront tags: " + join_sexpr("star", {left, right}));
  Node n;
  n.kind = Kind::Star;
  n.space = left.space();
  n.bideg = left.bidegree() + right.bidegree() + Bidegree{1, 1};
  check_bidegree(*n.space, n.bideg, "star");
  n.wf = union_tags({left, right});
  n.ch = {left, right};
  n.sexpr = join_sexpr("star", n.ch);
  return make_node(std::move(n));
}

Term ddc(const Term& t) {
  Node n;
  n.kind = Kind::DDC;
  n.space = t.space();
  n.bideg = t.bidegree() + Bidegree{1, 1};
  check_bidegree(*n.space, n.bideg, "ddc");
  n.wf = t.wavefront();
  n.ch = {t};
  n.sexpr = "(ddc " + t.sexpr() + ")";
  return make_node(std::move(n));
}

Term sum(const std::vector<std::pair<Integer, Term>>& terms) {
  Node n;
  n.kind = Kind::Sum;
  for (const auto& [c, t] : terms) {
    n.coef.push_back(c);
    n.ch.push_back(t);
  }
  same_type_children(n.ch, "sum", true);
  n.space = n.ch[0].space();
  n.bideg = n.ch[0].bidegree();
  n.wf = union_tags(n.ch);
  n.sexpr = "(sum";
  for (std::size_t i = 0; i < n.ch.size(); ++i) n.sexpr += " (" + n.coef[i].str() + " " + n.ch[i].sexpr() + ")";
  n.sexpr += ")";
  return make_node(std::move(n));
}

Term zero(const SpacePtr& X, Bidegree d) {
  check_bidegree(*X, d, "zero");
  Node n;
  n.kind = Kind::Zero;
  n.space = X;
  n.bideg = d;
  n.sexpr = "(zero " + X->name + " " + std::to_string(d.p) + " " + std::to_string(d.q) + ")";
  return make_node(std::move(n));
}

Term operator+(const Term& a, const Term& b) { return sum({{1, a}, {1, b}}); }
Term operator-(const Term& a, const Term& b) { return sum({{1, a}, {-1, b}}); }
Term operator-(const Term& a) { return sum({{-1, a}}); }
Term operator*(const Integer& k, const Term& t) { return sum({{k, t}}); }

bool atom_less(const Term& a, const Term& b) {
  if (a.space()->name != b.space()->name) return a.space()->name < b.space()->name;
  const int ka = kind_rank(a), kb = kind_rank(b);
  if (ka != kb) return ka < kb;
  return a.sexpr() < b.sexpr();
}

// ---------------------------------------------------------------------------
// AC canonicalization

namespace {

Term canon(const Term& t);

Term canon_sum(const SpacePtr& X, Bidegree d, const std::vector<std::pair<Integer, Term>>& terms) {
  std::map<std::string, std::pair<Integer, Term>> acc;
  auto add = [&](const Integer& c, const Term& u) {
    auto [it, fresh] = acc.try_emplace(u.sexpr(), c, u);
    if (!fresh) it->second.first += c;
  };
  for (const auto& [c, raw] : terms) {
    if (c.is_zero()) continue;
    const Term u = canon(raw);
    if (u.is_zero()) continue;
    if (u.kind() == Kind::Sum) {
      for (std::size_t i = 0; i < u.children().size(); ++i) add(c * u.coefficients()[i], u.children()[i]);
    } else {
      add(c, u);
    }
  }
  std::vector<std::pair<Integer, Term>> out;
  for (auto& [key, ct] : acc)
    if (!ct.first.is_zero()) out.push_back(std::move(ct));
  if (out.empty()) return zero(X, d);
  if (out.size() == 1 && out[0].first == Integer(1)) return out[0].second;
  return sum(out);
}

Term canon_wedge(const Term& t) {
  std::vector<Term> flat;
  for (const auto& raw : t.children()) {
    const Term c = canon(raw);
    if (c.is_zero()) return zero(t.space(), t.bidegree());
    if (c.kind() == Kind::Wedge)
      flat.insert(flat.end(), c.children().begin(), c.children().end());
    else
      flat.push_back(c);
  }
  for (std::size_t k = 0; k < flat.size(); ++k) {
    if (flat[k].kind() != Kind::Sum) continue;
    const Term& s = flat[k];
    std::vector<std::pair<Integer, Term>> terms;
    for (std::size_t i = 0; i < s.children().size(); ++i) {
      std::vector<Term> ch = flat;
      ch[k] = s.children()[i];
      terms.emplace_back(s.coefficients()[i], wedge(ch));
    }
    return canon_sum(t.space(), t.bidegree(), terms);
  }
  // Graded commutativity: only factors of odd total degree contribute a sign.
  int inversions = 0;
  for (std::size_t a = 0; a < flat.size(); ++a)
    for (std::size_t b = a + 1; b < flat.size(); ++b) {
      const bool odd_a = (flat[a].bidegree().p + flat[a].bidegree().q) % 2;
      const bool odd_b = (flat[b].bidegree().p + flat[b].bidegree().q) % 2;
      if (odd_a && odd_b && atom_less(flat[b], flat[a])) ++inversions;
    }
  std::stable_sort(flat.begin(), flat.end(), atom_less);
  const Term w = flat.size() == 1 ? flat[0] : wedge(flat);
  return inversions % 2 ? sum({{-1, w}}) : w;
}

Term canon(const Term& t) {
  switch (t.kind()) {
    case Kind::G:
    case Kind::Nu:
    case Kind::Delta:
    case Kind::Zero:
      return t;
    case Kind::Pullback: {
      const Term c = canon(t.children()[0]);
      if (c.is_zero()) return zero(t.space(), t.bidegree());
      return pullback(t.map(), c);
    }
    case Kind::Pushforward: {
      const Term c = canon(t.children()[0]);
      if (c.is_zero()) return zero(t.space(), t.bidegree());
      return pushforward(t.immersion(), c);
    }
    case Kind::DDC: {
      const Term c = canon(t.children()[0]);
      if (c.is_zero()) return zero(t.space(), t.bidegree());
      return ddc(c);
    }
    case Kind::Star: {
      const Term l = canon(t.children()[0]);
      const Term r = canon(t.children()[1]);
      if (l.is_zero() || r.is_zero()) return zero(t.space(), t.bidegree());
      std::vector<std::pair<Integer, Term>> terms;
      if (l.kind() == Kind::Sum) {
        for (std::size_t i = 0; i < l.children().size(); ++i)
          terms.emplace_back(l.coefficients()[i], star(l.children()[i], r));
      } else if (r.kind() == Kind::Sum) {
        for (std::size_t i = 0; i < r.children().size(); ++i)
          terms.emplace_back(r.coefficients()[i], star(l, r.children()[i]));
      } else {
        return star(l, r);
      }
      return canon_sum(t.space(), t.bidegree(), terms);
    }
    case Kind::Wedge:
      return canon_wedge(t);
    case Kind::Sum: {
      std::vector<std::pair<Integer, Term>> terms;
      for (std::size_t i = 0; i < t.children().size(); ++i)
        terms.emplace_back(t.coefficients()[i], t.children()[i]);
      return canon_sum(t.space(), t.bidegree(), terms);
    }
  }
  return t;
}

}  // namespace

Term canonicalize(const Term& t) { return canon(t); }

}  // namespace polylab::currents
