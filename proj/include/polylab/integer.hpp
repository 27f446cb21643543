#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <memory>
#include <ostream>
#include <string>

namespace polylab {

// Exact integer: int64 fast path, promoted to an mpz_class on overflow.
class Integer {
 public:
  Integer() = default;
  Integer(int v) : s_(v) {}
  Integer(long v) : s_(v) {}
  Integer(long long v) : s_(v) {}
  explicit Integer(const mpz_class& z) { set(z); }

  Integer(const Integer& o) : s_(o.s_), b_(o.b_ ? std::make_unique<mpz_class>(*o.b_) : nullptr) {}
  Integer(Integer&&) noexcept = default;
  Integer& operator=(const Integer& o) {
    if (this != &o) {
      s_ = o.s_;
      b_ = o.b_ ? std::make_unique<mpz_class>(*o.b_) : nullptr;
    }
    return *this;
  }
  Integer& operator=(Integer&&) noexcept = default;

  bool is_small() const { return !b_; }
  std::int64_t small() const { return s_; }
  mpz_class to_mpz() const { return b_ ? *b_ : mpz_class(static_cast<long>(s_)); }

  bool is_zero() const { return !b_ && s_ == 0; }
  bool is_unit() const { return !b_ && (s_ == 1 || s_ == -1); }
  int sign() const { return b_ ? sgn(*b_) : (s_ > 0) - (s_ < 0); }
  std::size_t bits() const;

  Integer& operator+=(const Integer& o) {
    long long r;
    if (!b_ && !o.b_ && !__builtin_add_overflow(s_, o.s_, &r)) {
      s_ = r;
      return *this;
    }
    set(to_mpz() + o.to_mpz());
    return *this;
  }
  Integer& operator-=(const Integer& o) {
    long long r;
    if (!b_ && !o.b_ && !__builtin_sub_overflow(s_, o.s_, &r)) {
      s_ = r;
      return *this;
    }
    set(to_mpz() - o.to_mpz());
    return *this;
  }
  Integer& operator*=(const Integer& o) {
    long long r;
    if (!b_ && !o.b_ && !__builtin_mul_overflow(s_, o.s_, &r)) {
      s_ = r;
      return *this;
    }
    set(to_mpz() * o.to_mpz());
    return *this;
  }
  // this -= a * b
  void submul(const Integer& a, const Integer& b) {
    long long p, r;
    if (!b_ && !a.b_ && !b.b_ && !__builtin_mul_overflow(a.s_, b.s_, &p) &&
        !__builtin_sub_overflow(s_, p, &r)) {
      s_ = r;
      return;
    }
    set(to_mpz() - a.to_mpz() * b.to_mpz());
  }
  // this += a * b
  void addmul(const Integer& a, const Integer& b) {
    long long p, r;
    if (!b_ && !a.b_ && !b.b_ && !__builtin_mul_overflow(a.s_, b.s_, &p) &&
        !__builtin_add_overflow(s_, p, &r)) {
      s_ = r;
      return;
    }
    set(to_mpz() + a.to_mpz() * b.to_mpz());
  }

  Integer operator-() const {
    if (!b_ && s_ != INT64_MIN) return Integer(static_cast<long long>(-s_));
    return Integer(mpz_class(-to_mpz()));
  }

  friend Integer operator+(Integer a, const Integer& b) { return a += b; }
  friend Integer operator-(Integer a, const Integer& b) { return a -= b; }
  friend Integer operator*(Integer a, const Integer& b) { return a *= b; }

  friend bool operator==(const Integer& a, const Integer& b) {
    if (!a.b_ && !b.b_) return a.s_ == b.s_;
    if (!a.b_ || !b.b_) return false;
    return *a.b_ == *b.b_;
  }
  friend std::strong_ordering operator<=>(const Integer& a, const Integer& b) {
    if (!a.b_ && !b.b_) return a.s_ <=> b.s_;
    const int c = cmp(a.to_mpz(), b.to_mpz());
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  std::string str() const { return b_ ? b_->get_str() : std::to_string(s_); }
  friend std::ostream& operator<<(std::ostream& os, const Integer& v) { return os << v.str(); }

 private:
  void set(const mpz_class& z) {
    if (z.fits_slong_p()) {
      s_ = z.get_si();
      b_.reset();
    } else {
      s_ = 0;
      if (b_)
        *b_ = z;
      else
        b_ = std::make_unique<mpz_class>(z);
    }
  }

  std::int64_t s_ = 0;
  std::unique_ptr<mpz_class> b_;
};

inline bool is_zero(const Integer& v) { return v.is_zero(); }
inline Integer abs(const Integer& v) { return v.sign() < 0 ? -v : v; }

// Floor division and the matching non-negative remainder (for b > 0).
Integer floor_div(const Integer& a, const Integer& b);
Integer floor_mod(const Integer& a, const Integer& b);
Integer exact_div(const Integer& a, const Integer& b);
Integer gcd(const Integer& a, const Integer& b);

// g = x*a + y*b with g = gcd(a, b) >= 0.
struct Xgcd {
  Integer g, x, y;
};
Xgcd xgcd(const Integer& a, const Integer& b);

}  // namespace polylab
