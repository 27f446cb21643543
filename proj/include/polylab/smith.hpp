#pragma once

#include <stdexcept>
#include <vector>

#include "polylab/matrix.hpp"

namespace polylab {

class SnfOverflow : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

struct SmithOptions {
  bool transforms = true;
  // When false, any entry leaving the int64 range raises SnfOverflow.
  bool allow_bigint = true;
};

// P A Q = D with D diagonal, d_1 | d_2 | ... , all positive.
struct SmithForm {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t rank = 0;
  std::vector<Integer> diagonal;
  bool has_transforms = false;
  IntMatrix P, Pinv, Q, Qinv;

  IntMatrix D() const;
  // Diagonal entries different from 1.
  std::vector<Integer> invariant_factors() const;
};

SmithForm smith_normal_form(const IntMatrix& A, SmithOptions opts = {});

// Recomputes U D V with U = P^-1, V = Q^-1 and compares with A; also checks P Pinv = 1.
bool verify_smith(const IntMatrix& A, const SmithForm& S);

// Row-style Hermite normal form H = U A: row echelon, positive pivots,
// entries above each pivot reduced into [0, pivot).
struct HermiteForm {
  IntMatrix H;
  IntMatrix U;
  std::vector<std::size_t> pivots;  // pivot column of row i, i < rank
};

HermiteForm hermite_normal_form(const IntMatrix& A);

}  // namespace polylab
