#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "polylab/integer.hpp"

namespace polylab {

inline bool is_zero(const mpq_class& v) { return sgn(v) == 0; }

template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : r_(rows), c_(cols), d_(rows * cols) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return r_; }
  std::size_t cols() const { return c_; }

  T& operator()(std::size_t i, std::size_t j) { return d_[i * c_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return d_[i * c_ + j]; }
  T* row(std::size_t i) { return d_.data() + i * c_; }
  const T* row(std::size_t i) const { return d_.data() + i * c_; }

  bool operator==(const Matrix& o) const { return r_ == o.r_ && c_ == o.c_ && d_ == o.d_; }

  bool is_zero_matrix() const {
    for (const T& v : d_)
      if (!is_zero(v)) return false;
    return true;
  }

  Matrix transpose() const {
    Matrix t(c_, r_);
    for (std::size_t i = 0; i < r_; ++i)
      for (std::size_t j = 0; j < c_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    Matrix b(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
    return b;
  }

  std::vector<T> column(std::size_t j) const {
    std::vector<T> v(r_);
    for (std::size_t i = 0; i < r_; ++i) v[i] = (*this)(i, j);
    return v;
  }

  std::vector<T> apply(const std::vector<T>& x) const {
    if (x.size() != c_) throw std::invalid_argument("matrix-vector size mismatch");
    std::vector<T> y(r_);
    for (std::size_t i = 0; i < r_; ++i) {
      const T* a = row(i);
      for (std::size_t j = 0; j < c_; ++j)
        if (!is_zero(a[j]) && !is_zero(x[j])) y[i] += a[j] * x[j];
    }
    return y;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.c_ != b.r_) throw std::invalid_argument("matrix product size mismatch");
    Matrix out(a.r_, b.c_);
    for (std::size_t i = 0; i < a.r_; ++i) {
      T* o = out.row(i);
      for (std::size_t k = 0; k < a.c_; ++k) {
        const T& aik = a(i, k);
        if (is_zero(aik)) continue;
        const T* br = b.row(k);
        for (std::size_t j = 0; j < b.c_; ++j)
          if (!is_zero(br[j])) o[j] += aik * br[j];
      }
    }
    return out;
  }

  friend Matrix operator-(const Matrix& a, const Matrix& b) {
    if (a.r_ != b.r_ || a.c_ != b.c_) throw std::invalid_argument("matrix difference size mismatch");
    Matrix out = a;
    for (std::size_t i = 0; i < a.d_.size(); ++i) out.d_[i] -= b.d_[i];
    return out;
  }

  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    if (a.r_ != b.r_ || a.c_ != b.c_) throw std::invalid_argument("matrix sum size mismatch");
    Matrix out = a;
    for (std::size_t i = 0; i < a.d_.size(); ++i) out.d_[i] += b.d_[i];
    return out;
  }

 private:
  std::size_t r_ = 0, c_ = 0;
  std::vector<T> d_;
};

using IntMatrix = Matrix<Integer>;
using RatMatrix = Matrix<mpq_class>;

RatMatrix to_rational(const IntMatrix& A);
// Row-major integer rendering, e.g. [[1,0],[0,1]].
std::string to_string(const IntMatrix& A);

}  // namespace polylab
