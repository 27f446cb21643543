#pragma once

#include <vector>

#include "polylab/matrix.hpp"

namespace polylab {

struct Rref {
  RatMatrix R;
  std::vector<std::size_t> pivots;
};

Rref rref(RatMatrix A);
std::size_t rank(const RatMatrix& A);
// Columns span the kernel.
RatMatrix kernel_basis(const RatMatrix& A);
// Columns span the column space (pivot columns of A).
RatMatrix column_space_basis(const RatMatrix& A);
RatMatrix inverse(const RatMatrix& A);
RatMatrix power(const RatMatrix& A, std::size_t k);
RatMatrix hconcat(const RatMatrix& A, const RatMatrix& B);
bool same_column_space(const RatMatrix& A, const RatMatrix& B);

}  // namespace polylab
