#include "polylab/smith.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace polylab {

RatMatrix to_rational(const IntMatrix& A) {
  RatMatrix R(A.rows(), A.cols());
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j)
      if (!A(i, j).is_zero()) R(i, j) = mpq_class(A(i, j).to_mpz());
  return R;
}

std::string to_string(const IntMatrix& A) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < A.rows(); ++i) {
    os << (i ? ",[" : "[");
    for (std::size_t j = 0; j < A.cols(); ++j) os << (j ? "," : "") << A(i, j);
    os << ']';
  }
  os << ']';
  return os.str();
}

namespace {

// Keeps P, P^-1, Q, Q^-1 in sync with the operations applied to the working matrix.
class Recorder {
 public:
  Recorder(std::size_t m, std::size_t n, bool on) : on_(on) {
    if (on_) {
      P = IntMatrix::identity(m);
      Pinv = IntMatrix::identity(m);
      Q = IntMatrix::identity(n);
      Qinv = IntMatrix::identity(n);
    }
  }

  // row_i += f row_r
  void row_add(std::size_t i, std::size_t r, const Integer& f) {
    if (!on_ || f.is_zero()) return;
    const std::size_t m = P.rows();
    Integer* pi = P.row(i);
    const Integer* pr = P.row(r);
    for (std::size_t k = 0; k < m; ++k)
      if (!pr[k].is_zero()) pi[k].addmul(f, pr[k]);
    for (std::size_t k = 0; k < m; ++k) {
      const Integer& v = Pinv(k, i);
      if (!v.is_zero()) Pinv(k, r).submul(f, v);
    }
  }

  // col_j += g col_c
  void col_add(std::size_t j, std::size_t c, const Integer& g) {
    if (!on_ || g.is_zero()) return;
    const std::size_t n = Q.rows();
    for (std::size_t k = 0; k < n; ++k) {
      const Integer& v = Q(k, c);
      if (!v.is_zero()) Q(k, j).addmul(g, v);
    }
    Integer* qc = Qinv.row(c);
    const Integer* qj = Qinv.row(j);
    for (std::size_t k = 0; k < n; ++k)
      if (!qj[k].is_zero()) qc[k].submul(g, qj[k]);
  }

  void row_negate(std::size_t i) {
    if (!on_) return;
    const std::size_t m = P.rows();
    for (std::size_t k = 0; k < m; ++k) {
      P(i, k) = -P(i, k);
      Pinv(k, i) = -Pinv(k, i);
    }
  }

  // (row_i, row_j) <- [[a, b], [c, d]] (row_i, row_j), unimodular.
  void row_mix(std::size_t i, std::size_t j, const Integer& a, const Integer& b, const Integer& c,
               const Integer& d) {
    if (!on_) return;
    const Integer det = a * d - b * c;
    const std::size_t m = P.rows();
    for (std::size_t k = 0; k < m; ++k) {
      const Integer x = P(i, k), y = P(j, k);
      P(i, k) = a * x + b * y;
      P(j, k) = c * x + d * y;
    }
    // Pinv <- Pinv L^-1, L^-1 = det [[d, -b], [-c, a]]
    const Integer i00 = det * d, i01 = -(det * b), i10 = -(det * c), i11 = det * a;
    for (std::size_t k = 0; k < m; ++k) {
      const Integer x = Pinv(k, i), y = Pinv(k, j);
      Pinv(k, i) = x * i00 + y * i10;
      Pinv(k, j) = x * i01 + y * i11;
    }
  }

  // (col_i, col_j) <- (col_i, col_j) [[a, b], [c, d]], unimodular.
  void col_mix(std::size_t i, std::size_t j, const Integer& a, const Integer& b, const Integer& c,
               const Integer& d) {
    if (!on_) return;
    const Integer det = a * d - b * c;
    const std::size_t n = Q.rows();
    for (std::size_t k = 0; k < n; ++k) {
      const Integer x = Q(k, i), y = Q(k, j);
      Q(k, i) = x * a + y * c;
      Q(k, j) = x * b + y * d;
    }
    const Integer i00 = det * d, i01 = -(det * b), i10 = -(det * c), i11 = det * a;
    for (std::size_t k = 0; k < n; ++k) {
      const Integer x = Qinv(i, k), y = Qinv(j, k);
      Qinv(i, k) = i00 * x + i01 * y;
      Qinv(j, k) = i10 * x + i11 * y;
    }
  }

  bool on_;
  IntMatrix P, Pinv, Q, Qinv;
};

using Entry = std::pair<std::uint32_t, Integer>;
using SparseRow = std::vector<Entry>;

const Integer* find_entry(const SparseRow& row, std::uint32_t col) {
  auto it = std::lower_bound(row.begin(), row.end(), col,
                             [](const Entry& e, std::uint32_t c) { return e.first < c; });
  return (it != row.end() && it->first == col) ? &it->second : nullptr;
}

struct Pivot {
  std::size_t row, col;
  Integer value;
};

class Eliminator {
 public:
  Eliminator(const IntMatrix& A, const SmithOptions& opts)
      : m_(A.rows()), n_(A.cols()), opts_(opts), rec_(A.rows(), A.cols(), opts.transforms),
        rows_(m_), col_rows_(n_), col_count_(n_, 0), row_alive_(m_, true), col_alive_(n_, true) {
    for (std::size_t i = 0; i < m_; ++i)
      for (std::size_t j = 0; j < n_; ++j)
        if (!A(i, j).is_zero()) {
          rows_[i].emplace_back(static_cast<std::uint32_t>(j), A(i, j));
          col_rows_[j].push_back(static_cast<std::uint32_t>(i));
          ++col_count_[j];
        }
  }

  SmithForm run() {
    unit_phase();
    dense_phase();
    return assemble();
  }

 private:
  void guard(const Integer& v) const {
    if (!opts_.allow_bigint && !v.is_small()) throw SnfOverflow("Smith normal form left the int64 range");
  }

  // Live rows with a nonzero entry in column c (deduplicated, compacted).
  std::vector<std::uint32_t> live_rows(std::size_t c) {
    std::vector<std::uint32_t>& list = col_rows_[c];
    std::vector<std::uint32_t> out;
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    for (std::uint32_t i : list)
      if (row_alive_[i] && find_entry(rows_[i], static_cast<std::uint32_t>(c))) out.push_back(i);
    list = out;
    return out;
  }

  // row_i -= f row_r on the sparse working matrix.
  void sparse_row_sub(std::size_t i, std::size_t r, const Integer& f) {
    SparseRow merged;
    const SparseRow &a = rows_[i], &b = rows_[r];
    merged.reserve(a.size() + b.size());
    std::size_t p = 0, q = 0;
    while (p < a.size() || q < b.size()) {
      if (q == b.size() || (p < a.size() && a[p].first < b[q].first)) {
        merged.push_back(a[p++]);
      } else if (p == a.size() || b[q].first < a[p].first) {
        Integer v;
        v.submul(f, b[q].second);
        guard(v);
        const std::uint32_t c = b[q].first;
        if (col_alive_[c]) {
          col_rows_[c].push_back(static_cast<std::uint32_t>(i));
          ++col_count_[c];
        }
        merged.emplace_back(c, std::move(v));
        ++q;
      } else {
        Integer v = a[p].second;
        v.submul(f, b[q].second);
        guard(v);
        if (v.is_zero()) {
          if (col_alive_[a[p].first]) --col_count_[a[p].first];
        } else {
          merged.emplace_back(a[p].first, std::move(v));
        }
        ++p;
        ++q;
      }
    }
    rows_[i] = std::move(merged);
    rec_.row_add(i, r, -f);
  }

  void retire(std::size_t r, std::size_t c) {
    for (const Entry& e : rows_[r])
      if (col_alive_[e.first]) --col_count_[e.first];
    rows_[r].clear();
    row_alive_[r] = false;
    col_alive_[c] = false;
  }

  void unit_phase() {
    std::vector<std::uint32_t> order;
    for (;;) {
      order.clear();
      for (std::size_t c = 0; c < n_; ++c)
        if (col_alive_[c] && col_count_[c] > 0) order.push_back(static_cast<std::uint32_t>(c));
      if (order.empty()) return;
      std::stable_sort(order.begin(), order.end(),
                       [&](std::uint32_t x, std::uint32_t y) { return col_count_[x] < col_count_[y]; });
      std::size_t best_row = m_, best_col = n_, best_len = SIZE_MAX;
      for (std::uint32_t c : order) {
        for (std::uint32_t i : live_rows(c)) {
          const Integer* v = find_entry(rows_[i], c);
          if (v->is_unit() && rows_[i].size() < best_len) {
            best_len = rows_[i].size();
            best_row = i;
            best_col = c;
          }
        }
        if (best_row != m_) break;
      }
      if (best_row == m_) return;
      eliminate_unit(best_row, best_col);
    }
  }

  void eliminate_unit(std::size_t r, std::size_t c) {
    const auto cc = static_cast<std::uint32_t>(c);
    const Integer p = *find_entry(rows_[r], cc);
    for (std::uint32_t i : live_rows(c)) {
      if (i == r) continue;
      const Integer f = *find_entry(rows_[i], cc) * p;
      sparse_row_sub(i, r, f);
    }
    if (rec_.on_)
      for (const Entry& e : rows_[r])
        if (e.first != cc) rec_.col_add(e.first, c, -(e.second * p));
    if (p.sign() < 0) rec_.row_negate(r);
    pivots_.push_back({r, c, Integer(1)});
    retire(r, c);
  }

  void dense_phase() {
    std::vector<std::size_t> R, C;
    for (std::size_t i = 0; i < m_; ++i)
      if (row_alive_[i] && !rows_[i].empty()) R.push_back(i);
    if (R.empty()) return;
    std::vector<int> cpos(n_, -1);
    for (std::size_t c = 0; c < n_; ++c)
      if (col_alive_[c] && col_count_[c] > 0) {
        cpos[c] = static_cast<int>(C.size());
        C.push_back(c);
      }
    IntMatrix B(R.size(), C.size());
    for (std::size_t a = 0; a < R.size(); ++a)
      for (const Entry& e : rows_[R[a]]) B(a, static_cast<std::size_t>(cpos[e.first])) = e.second;

    const std::size_t mr = R.size(), nc = C.size();
    std::vector<bool> rdone(mr, false), cdone(nc, false);
    for (;;) {
      std::size_t pi = mr, pj = nc;
      Integer best;
      for (std::size_t i = 0; i < mr; ++i) {
        if (rdone[i]) continue;
        for (std::size_t j = 0; j < nc; ++j) {
          if (cdone[j] || B(i, j).is_zero()) continue;
          const Integer v = abs(B(i, j));
          if (pi == mr || v < best) {
            best = v;
            pi = i;
            pj = j;
          }
        }
      }
      if (pi == mr) break;
      bool changed = true;
      while (changed) {
        changed = false;
        for (std::size_t l = 0; l < mr; ++l) {
          if (l == pi || rdone[l] || B(l, pj).is_zero()) continue;
          const Integer a = B(pi, pj), b = B(l, pj);
          if (floor_mod(b, a).is_zero()) {
            const Integer q = exact_div(b, a);
            for (std::size_t j = 0; j < nc; ++j)
              if (!B(pi, j).is_zero()) {
                B(l, j).submul(q, B(pi, j));
                guard(B(l, j));
              }
            rec_.row_add(R[l], R[pi], -q);
          } else {
            const Xgcd e = xgcd(a, b);
            const Integer c = -exact_div(b, e.g), d = exact_div(a, e.g);
            for (std::size_t j = 0; j < nc; ++j) {
              const Integer x = B(pi, j), y = B(l, j);
              B(pi, j) = e.x * x + e.y * y;
              B(l, j) = c * x + d * y;
              guard(B(pi, j));
              guard(B(l, j));
            }
            rec_.row_mix(R[pi], R[l], e.x, e.y, c, d);
          }
        }
        for (std::size_t l = 0; l < nc; ++l) {
          if (l == pj || cdone[l] || B(pi, l).is_zero()) continue;
          const Integer a = B(pi, pj), b = B(pi, l);
          if (floor_mod(b, a).is_zero()) {
            const Integer q = exact_div(b, a);
            for (std::size_t i = 0; i < mr; ++i)
              if (!B(i, pj).is_zero()) {
                B(i, l).submul(q, B(i, pj));
                guard(B(i, l));
              }
            rec_.col_add(C[l], C[pj], -q);
          } else {
            const Xgcd e = xgcd(a, b);
            const Integer bg = exact_div(b, e.g), ag = exact_div(a, e.g);
            for (std::size_t i = 0; i < mr; ++i) {
              const Integer x = B(i, pj), y = B(i, l);
              B(i, pj) = x * e.x + y * e.y;
              B(i, l) = -(x * bg) + y * ag;
              guard(B(i, pj));
              guard(B(i, l));
            }
            rec_.col_mix(C[pj], C[l], e.x, -bg, e.y, ag);
            changed = true;
          }
        }
      }
      Integer v = B(pi, pj);
      if (v.sign() < 0) {
        rec_.row_negate(R[pi]);
        v = -v;
      }
      pivots_.push_back({R[pi], C[pj], v});
      rdone[pi] = true;
      cdone[pj] = true;
    }
  }

  SmithForm assemble() {
    SmithForm S;
    S.rows = m_;
    S.cols = n_;
    S.rank = pivots_.size();
    S.has_transforms = opts_.transforms;
    std::vector<std::size_t> row_order, col_order;
    std::vector<bool> rused(m_, false), cused(n_, false);
    for (const Pivot& p : pivots_) {
      row_order.push_back(p.row);
      col_order.push_back(p.col);
      rused[p.row] = true;
      cused[p.col] = true;
      S.diagonal.push_back(p.value);
    }
    for (std::size_t i = 0; i < m_; ++i)
      if (!rused[i]) row_order.push_back(i);
    for (std::size_t j = 0; j < n_; ++j)
      if (!cused[j]) col_order.push_back(j);

    if (opts_.transforms) {
      S.P = IntMatrix(m_, m_);
      S.Pinv = IntMatrix(m_, m_);
      for (std::size_t a = 0; a < m_; ++a)
        for (std::size_t k = 0; k < m_; ++k) {
          S.P(a, k) = std::move(rec_.P(row_order[a], k));
          S.Pinv(k, a) = std::move(rec_.Pinv(k, row_order[a]));
        }
      S.Q = IntMatrix(n_, n_);
      S.Qinv = IntMatrix(n_, n_);
      for (std::size_t a = 0; a < n_; ++a)
        for (std::size_t k = 0; k < n_; ++k) {
          S.Q(k, a) = std::move(rec_.Q(k, col_order[a]));
          S.Qinv(a, k) = std::move(rec_.Qinv(col_order[a], k));
        }
    }
    fix_divisibility(S);
    return S;
  }

  // Enforces d_i | d_j through (d_i, d_j) -> (gcd, lcm) on 2x2 diagonal blocks.
  static void fix_divisibility(SmithForm& S) {
    Recorder rec(0, 0, false);
    if (S.has_transforms) {
      rec.on_ = true;
      rec.P = std::move(S.P);
      rec.Pinv = std::move(S.Pinv);
      rec.Q = std::move(S.Q);
      rec.Qinv = std::move(S.Qinv);
    }
    auto& d = S.diagonal;
    for (std::size_t i = 0; i < d.size(); ++i)
      for (std::size_t j = i + 1; j < d.size(); ++j) {
        const Integer a = d[i], b = d[j];
        if (floor_mod(b, a).is_zero()) continue;
        const Xgcd e = xgcd(a, b);
        rec.col_add(i, j, Integer(1));
        rec.row_mix(i, j, e.x, e.y, -exact_div(b, e.g), exact_div(a, e.g));
        rec.col_add(j, i, -exact_div(e.y * b, e.g));
        d[i] = e.g;
        d[j] = exact_div(a * b, e.g);
      }
    if (S.has_transforms) {
      S.P = std::move(rec.P);
      S.Pinv = std::move(rec.Pinv);
      S.Q = std::move(rec.Q);
      S.Qinv = std::move(rec.Qinv);
    }
  }

  std::size_t m_, n_;
  SmithOptions opts_;
  Recorder rec_;
  std::vector<SparseRow> rows_;
  std::vector<std::vector<std::uint32_t>> col_rows_;
  std::vector<std::size_t> col_count_;
  std::vector<bool> row_alive_, col_alive_;
  std::vector<Pivot> pivots_;
};

}  // namespace

IntMatrix SmithForm::D() const {
  IntMatrix out(rows, cols);
  for (std::size_t k = 0; k < rank; ++k) out(k, k) = diagonal[k];
  return out;
}

std::vector<Integer> SmithForm::invariant_factors() const {
  std::vector<Integer> out;
  for (const Integer& d : diagonal)
    if (!(d == Integer(1))) out.push_back(d);
  return out;
}

SmithForm smith_normal_form(const IntMatrix& A, SmithOptions opts) {
  Eliminator e(A, opts);
  return e.run();
}

bool verify_smith(const IntMatrix& A, const SmithForm& S) {
  if (!S.has_transforms || A.rows() != S.rows || A.cols() != S.cols) return false;
  const std::size_t m = S.rows, n = S.cols;
  for (std::size_t k = 0; k + 1 < S.rank; ++k)
    if (!floor_mod(S.diagonal[k + 1], S.diagonal[k]).is_zero()) return false;
  for (const Integer& d : S.diagonal)
    if (d.sign() <= 0) return false;
  // Sparse rows of D V.
  std::vector<std::vector<std::pair<std::size_t, Integer>>> dv(S.rank);
  for (std::size_t k = 0; k < S.rank; ++k)
    for (std::size_t j = 0; j < n; ++j)
      if (!S.Qinv(k, j).is_zero()) dv[k].emplace_back(j, S.diagonal[k] * S.Qinv(k, j));
  std::vector<Integer> acc(n);
  for (std::size_t i = 0; i < m; ++i) {
    std::fill(acc.begin(), acc.end(), Integer(0));
    for (std::size_t k = 0; k < S.rank; ++k) {
      const Integer& u = S.Pinv(i, k);
      if (u.is_zero()) continue;
      for (const auto& [j, v] : dv[k]) acc[j].addmul(u, v);
    }
    for (std::size_t j = 0; j < n; ++j)
      if (!(acc[j] == A(i, j))) return false;
  }
  return true;
}

HermiteForm hermite_normal_form(const IntMatrix& A) {
  const std::size_t m = A.rows(), n = A.cols();
  HermiteForm out{A, IntMatrix::identity(m), {}};
  IntMatrix& H = out.H;
  IntMatrix& U = out.U;
  auto mix = [&](IntMatrix& M, std::size_t i, std::size_t j, const Integer& a, const Integer& b,
                 const Integer& c, const Integer& d) {
    for (std::size_t k = 0; k < M.cols(); ++k) {
      const Integer x = M(i, k), y = M(j, k);
      M(i, k) = a * x + b * y;
      M(j, k) = c * x + d * y;
    }
  };
  std::size_t r = 0;
  for (std::size_t j = 0; j < n && r < m; ++j) {
    for (std::size_t i = r + 1; i < m; ++i) {
      if (H(i, j).is_zero()) continue;
      const Integer a = H(r, j), b = H(i, j);
      if (a.is_zero()) {
        mix(H, r, i, 0, 1, 1, 0);
        mix(U, r, i, 0, 1, 1, 0);
        continue;
      }
      const Xgcd e = xgcd(a, b);
      const Integer c = -exact_div(b, e.g), d = exact_div(a, e.g);
      mix(H, r, i, e.x, e.y, c, d);
      mix(U, r, i, e.x, e.y, c, d);
    }
    if (H(r, j).is_zero()) continue;
    if (H(r, j).sign() < 0) {
      mix(H, r, r, -1, 0, 0, -1);
      mix(U, r, r, -1, 0, 0, -1);
    }
    for (std::size_t k = 0; k < r; ++k) {
      const Integer q = floor_div(H(k, j), H(r, j));
      if (q.is_zero()) continue;
      for (std::size_t c = 0; c < n; ++c) H(k, c).submul(q, H(r, c));
      for (std::size_t c = 0; c < m; ++c) U(k, c).submul(q, U(r, c));
    }
    out.pivots.push_back(j);
    ++r;
  }
  return out;
}

}  // namespace polylab
