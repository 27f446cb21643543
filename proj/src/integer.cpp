#include "polylab/integer.hpp"

#include <stdexcept>

namespace polylab {

std::size_t Integer::bits() const {
  if (b_) return mpz_sizeinbase(b_->get_mpz_t(), 2);
  std::uint64_t u = s_ < 0 ? static_cast<std::uint64_t>(-(s_ + 1)) + 1 : static_cast<std::uint64_t>(s_);
  std::size_t n = 0;
  while (u) {
    ++n;
    u >>= 1;
  }
  return n;
}

Integer floor_div(const Integer& a, const Integer& b) {
  if (b.is_zero()) throw std::domain_error("division by zero");
  if (a.is_small() && b.is_small() && !(a.small() == INT64_MIN && b.small() == -1)) {
    const std::int64_t x = a.small(), y = b.small();
    std::int64_t q = x / y;
    if ((x % y != 0) && ((x < 0) != (y < 0))) --q;
    return Integer(static_cast<long long>(q));
  }
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), a.to_mpz().get_mpz_t(), b.to_mpz().get_mpz_t());
  return Integer(q);
}

Integer floor_mod(const Integer& a, const Integer& b) {
  Integer r = a;
  r.submul(floor_div(a, b), b);
  return r;
}

Integer exact_div(const Integer& a, const Integer& b) {
  if (b.is_zero()) throw std::domain_error("division by zero");
  if (a.is_small() && b.is_small() && !(a.small() == INT64_MIN && b.small() == -1))
    return Integer(static_cast<long long>(a.small() / b.small()));
  mpz_class q;
  mpz_divexact(q.get_mpz_t(), a.to_mpz().get_mpz_t(), b.to_mpz().get_mpz_t());
  return Integer(q);
}

Integer gcd(const Integer& a, const Integer& b) {
  if (a.is_small() && b.is_small() && a.small() != INT64_MIN && b.small() != INT64_MIN) {
    std::int64_t x = a.small() < 0 ? -a.small() : a.small();
    std::int64_t y = b.small() < 0 ? -b.small() : b.small();
    while (y) {
      const std::int64_t t = x % y;
      x = y;
      y = t;
    }
    return Integer(static_cast<long long>(x));
  }
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), a.to_mpz().get_mpz_t(), b.to_mpz().get_mpz_t());
  return Integer(g);
}

Xgcd xgcd(const Integer& a, const Integer& b) {
  mpz_class g, x, y;
  mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), a.to_mpz().get_mpz_t(),
             b.to_mpz().get_mpz_t());
  return {Integer(g), Integer(x), Integer(y)};
}

}  // namespace polylab
