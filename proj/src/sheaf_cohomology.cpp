#include "polylab/sheaf_cohomology.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <sstream>

#include "polylab/rational.hpp"

namespace polylab::sheaf {

namespace {

std::size_t ipow(std::size_t b, int e) {
  std::size_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

std::vector<int> digits(std::size_t w, int N, int len) {
  std::vector<int> out(len);
  for (int i = 0; i < len; ++i) {
    out[i] = static_cast<int>(w % N);
    w /= N;
  }
  return out;
}

std::size_t undigits(const std::vector<int>& d, int N) {
  std::size_t w = 0;
  for (int i = static_cast<int>(d.size()) - 1; i >= 0; --i) w = w * N + static_cast<std::size_t>(d[i]);
  return w;
}

int mod(long long a, int N) {
  const long long r = a % N;
  return static_cast<int>(r < 0 ? r + N : r);
}

std::string join(const std::vector<Integer>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + v[i].str();
  return out + "]";
}

IntMatrix rows_of(const IntMatrix& A, std::size_t r0, std::size_t r1) { return A.block(r0, 0, r1 - r0, A.cols()); }
IntMatrix cols_of(const IntMatrix& A, std::size_t c0, std::size_t c1) { return A.block(0, c0, A.rows(), c1 - c0); }


// Nonzero rows of the row-style HNF, i.e. a canonical basis of the row lattice.
IntMatrix row_lattice(const IntMatrix& A) {
  const HermiteForm H = hermite_normal_form(A);
  return H.H.block(0, 0, H.pivots.size(), A.cols());
}

void check_gcd(long long a, int N) {
  if (std::gcd(a, static_cast<long long>(N)) != 1)
    throw GcdViolation("trace needs gcd(a, N) = 1 (a = " + std::to_string(a) + ", N = " + std::to_string(N) + ")");
}

}  // namespace

// ---------------------------------------------------------------------------
// Logarithm modules

std::size_t LogModule::index_of(const std::vector<int>& alpha) const {
  const auto it = std::lower_bound(basis.begin(), basis.end(), alpha, [](const auto& a, const auto& b) {
    const int da = std::accumulate(a.begin(), a.end(), 0), db = std::accumulate(b.begin(), b.end(), 0);
    if (da != db) return da < db;
    return a > b;
  });
  if (it == basis.end() || *it != alpha) throw std::out_of_range("monomial not in the module");
  return static_cast<std::size_t>(it - basis.begin());
}

LogModule build_log_module(int g, int n) {
  if (g < 1 || n < 0) throw std::invalid_argument("build_log_module needs g >= 1, n >= 0");
  LogModule M;
  M.g = g;
  M.n = n;
  const int vars = 2 * g;
  std::vector<int> alpha(vars, 0);
  for (int deg = 0; deg <= n; ++deg) {
    std::vector<std::vector<int>> level;
    // Compositions of deg into vars parts, in decreasing lexicographic order.
    std::vector<int> a(vars, 0);
    a[0] = deg;
    for (;;) {
      level.push_back(a);
      int i = vars - 2;
      while (i >= 0 && a[i] == 0) --i;
      if (i < 0) break;
      --a[i];
      const int rest = std::accumulate(a.begin() + i + 1, a.end(), 0) + 1;
      std::fill(a.begin() + i + 1, a.end(), 0);
      a[i + 1] = rest;
    }
    M.basis.insert(M.basis.end(), level.begin(), level.end());
  }
  const std::size_t r = M.basis.size();
  for (int i = 0; i < vars; ++i) {
    IntMatrix T = IntMatrix::identity(r);
    for (std::size_t c = 0; c < r; ++c) {
      std::vector<int> up = M.basis[c];
      if (std::accumulate(up.begin(), up.end(), 0) >= n) continue;
      ++up[i];
      T(M.index_of(up), c) = 1;
    }
    M.T.push_back(std::move(T));
  }
  if (n > 0) {
    const LogModule lower = build_log_module(g, n - 1);
    M.transition = IntMatrix(lower.rank(), r);
    for (std::size_t c = 0; c < lower.rank(); ++c) M.transition(c, M.index_of(lower.basis[c])) = 1;
  } else {
    M.transition = IntMatrix(0, r);
  }
  M.augmentation.assign(r, Integer(0));
  M.augmentation[0] = 1;
  return M;
}

LogModule trivial_module(int g) { return build_log_module(g, 0); }

// ---------------------------------------------------------------------------
// Cell complexes

std::size_t CochainComplex::vertices() const { return ipow(static_cast<std::size_t>(N), 2 * g); }

std::size_t CochainComplex::total_dim() const {
  std::size_t s = 0;
  for (int k = 0; k <= 2 * g; ++k) s += dim(k);
  return s;
}

std::size_t CochainComplex::index(std::size_t w, unsigned J, std::size_t b) const {
  const auto& S = subsets[std::popcount(J)];
  const std::size_t pos = static_cast<std::size_t>(std::lower_bound(S.begin(), S.end(), J) - S.begin());
  return (w * S.size() + pos) * module_rank + b;
}

std::size_t complex_size(int g, std::size_t module_rank, int N) {
  return ipow(static_cast<std::size_t>(N), 2 * g) * module_rank * ipow(2, 2 * g);
}

CochainComplex cellular_complex(const LogModule& M, int N, std::size_t budget) {
  if (N < 1) throw std::invalid_argument("resolution must be positive");
  const int g = M.g;
  const std::size_t size = complex_size(g, M.rank(), N);
  if (size > budget)
    throw BudgetExceeded("complex of total rank " + std::to_string(size) + " exceeds the budget " +
                         std::to_string(budget) + " (g=" + std::to_string(g) + ", n=" + std::to_string(M.n) +
                         ", N=" + std::to_string(N) + ")");
  CochainComplex C;
  C.g = g;
  C.N = N;
  C.module_rank = M.rank();
  const int vars = 2 * g;
  C.subsets.resize(vars + 1);
  for (unsigned J = 0; J < (1u << vars); ++J) C.subsets[std::popcount(J)].push_back(J);
  const std::size_t r = M.rank();
  const std::size_t V = C.vertices();
  for (int k = 0; k < vars; ++k) {
    IntMatrix d(C.dim(k + 1), C.dim(k));
    for (std::size_t w = 0; w < V; ++w) {
      const std::vector<int> wd = digits(w, N, vars);
      for (unsigned J : C.subsets[k + 1]) {
        int p = 0;
        for (int j = 0; j < vars; ++j) {
          if (!(J & (1u << j))) continue;
          const int sign = p % 2 ? -1 : 1;
          ++p;
          const unsigned Jm = J & ~(1u << j);
          std::vector<int> nd = wd;
          const bool wrap = nd[j] == N - 1;
          nd[j] = (nd[j] + 1) % N;
          const std::size_t wn = undigits(nd, N);
          const std::size_t row0 = C.index(w, J, 0);
          const std::size_t col_next = C.index(wn, Jm, 0);
          const std::size_t col_here = C.index(w, Jm, 0);
          for (std::size_t a = 0; a < r; ++a)
            for (std::size_t b = 0; b < r; ++b) {
              Integer t = wrap ? M.T[j](a, b) : Integer(a == b ? 1 : 0);
              if (!t.is_zero()) d(row0 + a, col_next + b) += sign * t;
            }
          for (std::size_t a = 0; a < r; ++a) d(row0 + a, col_here + a) -= sign;
        }
      }
    }
    C.d.push_back(std::move(d));
  }
  for (int k = 0; k + 1 < vars; ++k)
    if (!(C.d[k + 1] * C.d[k]).is_zero_matrix()) throw std::logic_error("d o d != 0");
  return C;
}

// ---------------------------------------------------------------------------
// Cohomology of the torus

std::string CohomologyGroup::str() const {
  return "H^" + std::to_string(degree) + " free=" + std::to_string(free_rank) + " torsion=" + join(torsion);
}

std::int64_t CohomologyResult::euler_characteristic() const {
  std::int64_t chi = 0;
  for (const auto& h : H) chi += (h.degree % 2 ? -1 : 1) * static_cast<std::int64_t>(h.free_rank);
  return chi;
}

std::string CohomologyResult::report() const {
  std::ostringstream os;
  os << "torus g=" << g << " N=" << N << " module_rank=" << module_rank << "\n";
  for (const auto& h : H) os << h.str() << "\n";
  for (const auto& [name, A] : maps) os << "map " << name << " " << A.rows() << "x" << A.cols() << " " << to_string(A) << "\n";
  return os.str();
}

namespace {

CohomologyGroup make_group(int k, const IntMatrix* d_out, const IntMatrix* d_in, std::size_t dim) {
  CohomologyGroup h;
  h.degree = k;
  IntMatrix coords;
  if (d_out) {
    const SmithForm S = smith_normal_form(*d_out);
    if (!verify_smith(*d_out, S)) throw std::logic_error("Smith form verification failed");
    h.cocycles = cols_of(S.Q, S.rank, dim);
    coords = rows_of(S.Qinv, S.rank, dim);
  } else {
    h.cocycles = IntMatrix::identity(dim);
    coords = IntMatrix::identity(dim);
  }
  const std::size_t z = h.cocycles.cols();
  const IntMatrix B = d_in ? coords * *d_in : IntMatrix(z, 0);
  const SmithForm S3 = smith_normal_form(B);
  if (!verify_smith(B, S3)) throw std::logic_error("Smith form verification failed");
  h.offset = S3.rank;
  h.divisors = S3.diagonal;
  h.free_rank = z - S3.rank;
  for (const auto& d : S3.diagonal)
    if (!d.is_unit()) h.torsion.push_back(d);
  h.coordinates = S3.P * coords;
  h.representatives = h.cocycles * cols_of(S3.Pinv, S3.rank, z);
  return h;
}

}  // namespace

CohomologyResult torus_cohomology(const LogModule& M, int N, std::size_t budget) {
  const CochainComplex C = cellular_complex(M, N, budget);
  CohomologyResult R;
  R.g = M.g;
  R.N = N;
  R.module_rank = M.rank();
  const int top = 2 * M.g;
  for (int k = 0; k <= top; ++k)
    R.H.push_back(make_group(k, k < top ? &C.d[k] : nullptr, k > 0 ? &C.d[k - 1] : nullptr, C.dim(k)));
  return R;
}

IntMatrix induced_map(const CohomologyGroup& src, const CohomologyGroup& tgt, const IntMatrix& F) {
  return rows_of(tgt.coordinates, tgt.offset, tgt.offset + tgt.free_rank) * F * src.representatives;
}

bool induces_zero(const CohomologyGroup& src, const CohomologyGroup& tgt, const IntMatrix& F) {
  const IntMatrix Y = tgt.coordinates * (F * src.cocycles);
  for (std::size_t i = 0; i < Y.rows(); ++i)
    for (std::size_t j = 0; j < Y.cols(); ++j) {
      if (Y(i, j).is_zero()) continue;
      if (i >= tgt.offset) return false;
      if (!floor_mod(Y(i, j), tgt.divisors[i]).is_zero()) return false;
    }
  return true;
}

IntMatrix transition_chain_map(const CochainComplex& src, const LogModule& M, int k) {
  const std::size_t cells = src.dim(k) / src.module_rank;
  const std::size_t rt = M.transition.rows(), rs = M.transition.cols();
  IntMatrix F(cells * rt, cells * rs);
  for (std::size_t c = 0; c < cells; ++c)
    for (std::size_t a = 0; a < rt; ++a)
      for (std::size_t b = 0; b < rs; ++b)
        if (!M.transition(a, b).is_zero()) F(c * rt + a, c * rs + b) = M.transition(a, b);
  return F;
}

TransitionCheck check_transition(int g, int n) {
  if (n < 1) throw std::invalid_argument("transition needs n >= 1");
  const LogModule M = build_log_module(g, n);
  const LogModule L = build_log_module(g, n - 1);
  const CochainComplex C = cellular_complex(M, 1);
  const CohomologyResult Rs = torus_cohomology(M, 1);
  const CohomologyResult Rt = torus_cohomology(L, 1);
  TransitionCheck out;
  out.g = g;
  out.n = n;
  for (int k = 0; k < 2 * g; ++k)
    out.zero_below_top.push_back(induces_zero(Rs.H[k], Rt.H[k], transition_chain_map(C, M, k)));
  const CohomologyGroup& hs = Rs.H[2 * g];
  const CohomologyGroup& ht = Rt.H[2 * g];
  out.top = induced_map(hs, ht, transition_chain_map(C, M, 2 * g));
  out.top_isomorphism = hs.torsion.empty() && ht.torsion.empty() && out.top.rows() == out.top.cols() &&
                        out.top.rows() == 1 && out.top(0, 0).is_unit();
  return out;
}

// ---------------------------------------------------------------------------
// Punctured torus

std::string PuncturedCohomology::report() const {
  std::ostringstream os;
  os << "punctured g=" << g << " n=" << n << " N=" << N << " module_rank=" << module_rank << " punctures=" << punctures
     << "\n";
  os << "H^" << 2 * g - 1 << "(X) free=" << torus_free_rank << " torsion=" << join(torus_torsion) << "\n";
  os << "H^" << 2 * g << "(X) free=" << top_free_rank << " torsion=" << join(top_torsion) << "\n";
  os << "H^" << 2 * g - 1 << "(X\\P) free=" << free_rank << " torsion=" << join(torsion) << "\n";
  os << "map residue " << residue.rows() << "x" << residue.cols() << " " << to_string(residue) << "\n";
  os << "map connecting " << connecting.rows() << "x" << connecting.cols() << " " << to_string(connecting) << "\n";
  os << "exact " << (exact ? "true" : "false") << "\n";
  return os.str();
}

PuncturedCohomology punctured_cohomology(const LogModule& M, int N, std::size_t budget) {
  const CochainComplex C = cellular_complex(M, N, budget);
  const int top = 2 * M.g;
  PuncturedCohomology P;
  P.g = M.g;
  P.n = M.n;
  P.N = N;
  P.module_rank = M.rank();
  P.punctures = C.vertices();
  P.d_lower = C.d[top - 2];
  P.d_upper = C.d[top - 1];
  P.lower = smith_normal_form(P.d_lower);
  P.upper = smith_normal_form(P.d_upper);
  if (!verify_smith(P.d_lower, P.lower) || !verify_smith(P.d_upper, P.upper))
    throw std::logic_error("Smith form verification failed");

  const std::size_t m = C.dim(top - 1), s = C.dim(top);
  const std::size_t r2 = P.lower.rank, r1 = P.upper.rank;
  for (const auto& d : P.lower.diagonal)
    if (!d.is_unit()) P.torsion.push_back(d);
  P.torus_torsion = P.torsion;
  P.free_rank = m - r2;
  P.torus_free_rank = m - r1 - r2;
  for (const auto& d : P.upper.diagonal)
    if (!d.is_unit()) P.top_torsion.push_back(d);
  P.top_free_rank = s - r1;

  P.residue = P.d_upper * cols_of(P.lower.Pinv, r2, m);
  P.connecting = rows_of(P.upper.P, r1, s);

  bool ok = (P.connecting * P.residue).is_zero_matrix();
  const std::size_t res_rank = rank(to_rational(P.residue));
  ok = ok && res_rank + P.top_free_rank == s && P.free_rank == P.torus_free_rank + res_rank;
  // Image of the residue equals the kernel of the map to H^{2g}(X), as lattices.
  IntMatrix K(r1, s);
  for (std::size_t i = 0; i < r1; ++i)
    for (std::size_t j = 0; j < s; ++j) K(i, j) = P.upper.Pinv(j, i) * P.upper.diagonal[i];
  ok = ok && row_lattice(P.residue.transpose()) == row_lattice(K);
  // The connecting functional is the augmentation summed over the punctures.
  if (P.top_free_rank == 1 && P.top_torsion.empty()) {
    std::vector<Integer> aug(s);
    for (std::size_t p = 0; p < P.punctures; ++p)
      for (std::size_t b = 0; b < P.module_rank; ++b) aug[p * P.module_rank + b] = M.augmentation[b];
    bool plus = true, minus = true;
    for (std::size_t j = 0; j < s; ++j) {
      plus = plus && P.connecting(0, j) == aug[j];
      minus = minus && P.connecting(0, j) == -aug[j];
    }
    ok = ok && (plus || minus);
  } else {
    ok = false;
  }
  P.exact = ok;
  return P;
}

PolylogClass residue_preimage(const PuncturedCohomology& P, const std::vector<Integer>& stalks) {
  const std::size_t s = P.stalk_dim();
  if (stalks.size() != s) throw std::invalid_argument("stalk vector has the wrong size");
  const std::vector<Integer> y = P.upper.P.apply(stalks);
  const std::size_t r1 = P.upper.rank;
  std::vector<Integer> c(P.d_upper.cols());
  for (std::size_t i = 0; i < s; ++i) {
    if (i < r1) {
      if (!floor_mod(y[i], P.upper.diagonal[i]).is_zero())
        throw ResidueInfeasible("stalk data is not a residue (fails divisibility by " + P.upper.diagonal[i].str() + ")");
      c[i] = exact_div(y[i], P.upper.diagonal[i]);
    } else if (!y[i].is_zero()) {
      throw ResidueInfeasible("stalk data has nonzero image in H^top (augmentation condition)");
    }
  }
  PolylogClass out;
  out.stalks = stalks;
  out.cochain = P.upper.Q.apply(c);
  if (P.d_upper.apply(out.cochain) != stalks) throw std::logic_error("residue back-substitution failed");
  const std::vector<Integer> z = P.lower.P.apply(out.cochain);
  out.coordinates.assign(z.begin() + static_cast<std::ptrdiff_t>(P.lower.rank), z.end());
  return out;
}

PolylogClass polylog_class(const PuncturedCohomology& P, const std::vector<Integer>& phi) {
  if (phi.size() + 1 != P.punctures) throw std::invalid_argument("phi needs one entry per nonzero puncture");
  std::vector<Integer> stalks(P.stalk_dim());
  Integer total;
  for (std::size_t x = 1; x < P.punctures; ++x) {
    stalks[x * P.module_rank] = phi[x - 1];
    total += phi[x - 1];
  }
  stalks[0] = -total;
  return residue_preimage(P, stalks);
}

// ---------------------------------------------------------------------------
// Traces

IntMatrix trace_cochains(int g, int N, long long a, int k) {
  if (a < 1) throw std::invalid_argument("trace needs a >= 1");
  const int vars = 2 * g;
  CochainComplex C;
  C.g = g;
  C.N = N;
  C.subsets.resize(vars + 1);
  for (unsigned J = 0; J < (1u << vars); ++J) C.subsets[std::popcount(J)].push_back(J);
  const std::size_t dim = C.dim(k);
  IntMatrix T(dim, dim);
  for (std::size_t w = 0; w < C.vertices(); ++w) {
    const std::vector<int> wd = digits(w, N, vars);
    for (unsigned J : C.subsets[k]) {
      std::vector<int> free_dirs;
      for (int i = 0; i < vars; ++i)
        if (!(J & (1u << i))) free_dirs.push_back(i);
      const std::size_t combos = ipow(static_cast<std::size_t>(a), static_cast<int>(free_dirs.size()));
      const std::size_t col = C.index(w, J, 0);
      for (std::size_t o = 0; o < combos; ++o) {
        std::vector<int> td(vars);
        std::size_t rest = o;
        for (int i = 0; i < vars; ++i) td[i] = mod(a * wd[i], N);
        for (int i : free_dirs) {
          td[i] = mod(a * wd[i] - static_cast<long long>(rest % a), N);
          rest /= a;
        }
        T(C.index(undigits(td, N), J, 0), col) += 1;
      }
    }
  }
  return T;
}

IntMatrix trace_on_cohomology(const CohomologyResult& R, long long a, int k) {
  if (R.module_rank != 1) throw std::invalid_argument("trace is implemented for trivial coefficients");
  return induced_map(R.H[k], R.H[k], trace_cochains(R.g, R.N, a, k));
}

IntMatrix trace_on_stalks(const PuncturedCohomology& P, long long a) {
  check_gcd(a, P.N);
  if (P.module_rank != 1) throw std::invalid_argument("trace is implemented for trivial coefficients");
  return trace_cochains(P.g, P.N, a, 2 * P.g);
}

IntMatrix trace_on_punctured(const PuncturedCohomology& P, long long a) {
  check_gcd(a, P.N);
  if (P.module_rank != 1) throw std::invalid_argument("trace is implemented for trivial coefficients");
  const std::size_t m = P.d_lower.rows(), r2 = P.lower.rank;
  return rows_of(P.lower.P, r2, m) * trace_cochains(P.g, P.N, a, 2 * P.g - 1) * cols_of(P.lower.Pinv, r2, m);
}

namespace {

RatMatrix shifted_power(const RatMatrix& T, long long a, int r) {
  if (T.rows() != T.cols()) throw std::invalid_argument("weight decomposition needs a square matrix");
  mpz_class lambda = 1;
  for (int i = 0; i < r; ++i) lambda *= static_cast<long>(a);
  RatMatrix A = T;
  for (std::size_t i = 0; i < A.rows(); ++i) A(i, i) -= mpq_class(lambda);
  return power(A, std::max<std::size_t>(A.rows(), 1));
}

}  // namespace

RatMatrix weight_eigenspace(const RatMatrix& T, long long a, int r) { return kernel_basis(shifted_power(T, a, r)); }

RatMatrix weight_projector(const RatMatrix& T, long long a, int r) {
  const RatMatrix A = shifted_power(T, a, r);
  const RatMatrix K = kernel_basis(A);
  const RatMatrix B = hconcat(K, column_space_basis(A));
  const RatMatrix Binv = inverse(B);
  return K * Binv.block(0, 0, K.cols(), Binv.cols());
}

int multiplicative_order(long long a, int N) {
  if (N < 1) throw std::invalid_argument("modulus must be positive");
  if (std::gcd(a, static_cast<long long>(N)) != 1) throw GcdViolation("a is not a unit modulo N");
  int k = 1;
  long long x = mod(a, N);
  while (mod(x, N) != mod(1, N)) {
    x = mod(x * a, N);
    ++k;
  }
  return k;
}

}  // namespace polylab::sheaf
