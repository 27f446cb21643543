#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <functional>
#include <random>
#include <vector>

#include "polylab/integer.hpp"
#include "polylab/rational.hpp"
#include "polylab/smith.hpp"

using namespace polylab;

namespace {

IntMatrix from_rows(const std::vector<std::vector<long long>>& rows) {
  IntMatrix A(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) A(i, j) = Integer(rows[i][j]);
  return A;
}

Integer det(const IntMatrix& A) {
  const std::size_t n = A.rows();
  if (n == 1) return A(0, 0);
  Integer out;
  for (std::size_t c = 0; c < n; ++c) {
    IntMatrix minor(n - 1, n - 1);
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t j = 0, k = 0; j < n; ++j)
        if (j != c) minor(i - 1, k++) = A(i, j);
    const Integer term = A(0, c) * det(minor);
    if (c % 2 == 0)
      out += term;
    else
      out -= term;
  }
  return out;
}

// gcd of all k x k minors (determinantal divisor).
Integer minor_gcd(const IntMatrix& A, std::size_t k) {
  Integer g;
  std::vector<std::size_t> rs(k), cs(k);
  std::function<void(std::size_t, std::size_t)> pick_cols;
  std::function<void(std::size_t, std::size_t)> pick_rows = [&](std::size_t pos, std::size_t start) {
    if (pos == k) {
      pick_cols(0, 0);
      return;
    }
    for (std::size_t i = start; i < A.rows(); ++i) {
      rs[pos] = i;
      pick_rows(pos + 1, i + 1);
    }
  };
  pick_cols = [&](std::size_t pos, std::size_t start) {
    if (pos == k) {
      IntMatrix M(k, k);
      for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b) M(a, b) = A(rs[a], cs[b]);
      g = gcd(g, det(M));
      return;
    }
    for (std::size_t j = start; j < A.cols(); ++j) {
      cs[pos] = j;
      pick_cols(pos + 1, j + 1);
    }
  };
  pick_rows(0, 0);
  return g;
}

}  // namespace

TEST_CASE("integer promotion and demotion") {
  Integer a(INT64_MAX);
  a += 1;
  CHECK_FALSE(a.is_small());
  CHECK(a.str() == "9223372036854775808");
  a -= 1;
  CHECK(a.is_small());
  CHECK(a == Integer(INT64_MAX));
  Integer b(3037000500LL);
  b *= b;
  CHECK_FALSE(b.is_small());
  CHECK(b.str() == "9223372037000250000");
  CHECK(floor_div(Integer(-7), Integer(2)) == Integer(-4));
  CHECK(floor_mod(Integer(-7), Integer(2)) == Integer(1));
  CHECK(gcd(Integer(-12), Integer(18)) == Integer(6));
  const Xgcd e = xgcd(Integer(240), Integer(46));
  CHECK(e.g == Integer(2));
  CHECK(e.x * Integer(240) + e.y * Integer(46) == Integer(2));
  CHECK(Integer(-5) < Integer(3));
  CHECK(-Integer(INT64_MIN) > Integer(INT64_MAX));
}

TEST_CASE("textbook Smith normal form") {
  const IntMatrix A = from_rows({{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}});
  const SmithForm S = smith_normal_form(A);
  REQUIRE(S.rank == 3);
  CHECK(S.diagonal[0] == Integer(2));
  CHECK(S.diagonal[1] == Integer(6));
  CHECK(S.diagonal[2] == Integer(12));
  CHECK(verify_smith(A, S));
  CHECK(S.P * A * S.Q == S.D());
  CHECK(S.P * S.Pinv == IntMatrix::identity(3));
  CHECK(S.Q * S.Qinv == IntMatrix::identity(3));
}

TEST_CASE("Smith form of random matrices matches determinantal divisors") {
  std::mt19937_64 gen(99);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t m = 2 + gen() % 3, n = 2 + gen() % 4;
    IntMatrix A(m, n);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const long long v = static_cast<long long>(gen() % 9) - 4;
        A(i, j) = Integer(gen() % 3 == 0 ? 0 : v * (trial % 4 == 0 ? 6 : 1));
      }
    const SmithForm S = smith_normal_form(A);
    CHECK(verify_smith(A, S));
    CHECK(S.P * A * S.Q == S.D());
    CHECK(S.P * S.Pinv == IntMatrix::identity(m));
    CHECK(S.Q * S.Qinv == IntMatrix::identity(n));
    Integer prod(1);
    for (std::size_t k = 1; k <= std::min(m, n); ++k) {
      const Integer dk = minor_gcd(A, k);
      if (k <= S.rank) {
        prod *= S.diagonal[k - 1];
        CHECK(dk == prod);
      } else {
        CHECK(dk.is_zero());
      }
    }
    const SmithForm bare = smith_normal_form(A, {.transforms = false});
    CHECK(bare.diagonal == S.diagonal);
  }
}

TEST_CASE("big entries are exact and bounded mode reports overflow") {
  const IntMatrix A = from_rows({{INT64_MAX, 3}, {5, INT64_MAX}});
  const SmithForm S = smith_normal_form(A);
  CHECK(verify_smith(A, S));
  CHECK(S.P * A * S.Q == S.D());
  CHECK_THROWS_AS(smith_normal_form(A, {.transforms = true, .allow_bigint = false}), SnfOverflow);
}

TEST_CASE("zero and degenerate shapes") {
  const SmithForm Z = smith_normal_form(IntMatrix(3, 2));
  CHECK(Z.rank == 0);
  CHECK(verify_smith(IntMatrix(3, 2), Z));
  const SmithForm E = smith_normal_form(IntMatrix(0, 4));
  CHECK(E.rank == 0);
  CHECK(E.Q.rows() == 4);
}

TEST_CASE("Hermite normal form") {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 40; ++trial) {
    IntMatrix A(4, 5);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 5; ++j) A(i, j) = Integer(static_cast<long long>(gen() % 7) - 3);
    const HermiteForm H = hermite_normal_form(A);
    CHECK(H.U * A == H.H);
    CHECK(std::abs(det(H.U).small()) == 1);
    for (std::size_t r = 0; r < H.pivots.size(); ++r) {
      const std::size_t p = H.pivots[r];
      CHECK(H.H(r, p).sign() > 0);
      for (std::size_t c = 0; c < p; ++c) CHECK(H.H(r, c).is_zero());
      for (std::size_t k = 0; k < r; ++k) {
        CHECK(H.H(k, p).sign() >= 0);
        CHECK(H.H(k, p) < H.H(r, p));
      }
    }
    for (std::size_t r = H.pivots.size(); r < 4; ++r)
      for (std::size_t c = 0; c < 5; ++c) CHECK(H.H(r, c).is_zero());
  }
}

TEST_CASE("rational kernels and ranks") {
  RatMatrix A(3, 4);
  const int vals[3][4] = {{1, 2, 3, 4}, {2, 4, 6, 8}, {0, 1, 1, 0}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 4; ++j) A(i, j) = vals[i][j];
  CHECK(rank(A) == 2);
  const RatMatrix K = kernel_basis(A);
  CHECK(K.cols() == 2);
  CHECK((A * K).is_zero_matrix());
  RatMatrix B(2, 2);
  B(0, 0) = 2;
  B(0, 1) = 1;
  B(1, 0) = 1;
  B(1, 1) = 1;
  CHECK(B * inverse(B) == RatMatrix::identity(2));
  CHECK(same_column_space(B, RatMatrix::identity(2)));
}
