#include "polylab/rational.hpp"

#include <stdexcept>

namespace polylab {

Rref rref(RatMatrix A) {
  const std::size_t m = A.rows(), n = A.cols();
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t j = 0; j < n && r < m; ++j) {
    std::size_t p = r;
    while (p < m && sgn(A(p, j)) == 0) ++p;
    if (p == m) continue;
    if (p != r)
      for (std::size_t k = 0; k < n; ++k) std::swap(A(p, k), A(r, k));
    const mpq_class inv = 1 / A(r, j);
    for (std::size_t k = 0; k < n; ++k) A(r, k) *= inv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == r || sgn(A(i, j)) == 0) continue;
      const mpq_class f = A(i, j);
      for (std::size_t k = 0; k < n; ++k)
        if (sgn(A(r, k)) != 0) A(i, k) -= f * A(r, k);
    }
    pivots.push_back(j);
    ++r;
  }
  return {std::move(A), std::move(pivots)};
}

std::size_t rank(const RatMatrix& A) { return rref(A).pivots.size(); }

RatMatrix kernel_basis(const RatMatrix& A) {
  const Rref e = rref(A);
  const std::size_t n = A.cols();
  std::vector<bool> is_pivot(n, false);
  for (std::size_t p : e.pivots) is_pivot[p] = true;
  RatMatrix K(n, n - e.pivots.size());
  std::size_t col = 0;
  for (std::size_t f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    K(f, col) = 1;
    for (std::size_t r = 0; r < e.pivots.size(); ++r) K(e.pivots[r], col) = -e.R(r, f);
    ++col;
  }
  return K;
}

RatMatrix column_space_basis(const RatMatrix& A) {
  const Rref e = rref(A);
  RatMatrix B(A.rows(), e.pivots.size());
  for (std::size_t c = 0; c < e.pivots.size(); ++c)
    for (std::size_t i = 0; i < A.rows(); ++i) B(i, c) = A(i, e.pivots[c]);
  return B;
}

RatMatrix hconcat(const RatMatrix& A, const RatMatrix& B) {
  if (A.rows() != B.rows()) throw std::invalid_argument("hconcat row mismatch");
  RatMatrix C(A.rows(), A.cols() + B.cols());
  for (std::size_t i = 0; i < A.rows(); ++i) {
    for (std::size_t j = 0; j < A.cols(); ++j) C(i, j) = A(i, j);
    for (std::size_t j = 0; j < B.cols(); ++j) C(i, A.cols() + j) = B(i, j);
  }
  return C;
}

RatMatrix inverse(const RatMatrix& A) {
  const std::size_t n = A.rows();
  if (A.cols() != n) throw std::invalid_argument("inverse of a non-square matrix");
  const Rref e = rref(hconcat(A, RatMatrix::identity(n)));
  if (e.pivots.size() < n || e.pivots[n - 1] != n - 1) throw std::domain_error("singular matrix");
  return e.R.block(0, n, n, n);
}

RatMatrix power(const RatMatrix& A, std::size_t k) {
  RatMatrix out = RatMatrix::identity(A.rows());
  for (std::size_t i = 0; i < k; ++i) out = out * A;
  return out;
}

bool same_column_space(const RatMatrix& A, const RatMatrix& B) {
  const std::size_t ra = rank(A), rb = rank(B);
  return ra == rb && rank(hconcat(A, B)) == ra;
}

}  // namespace polylab
