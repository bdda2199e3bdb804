#pragma once

#include "lognabla/padic.hpp"

#include <cstddef>
#include <vector>

namespace lognabla {

class PadicMatrix {
 public:
  PadicMatrix() = default;
  PadicMatrix(const PadicContext& ctx, std::size_t rows, std::size_t cols);

  static PadicMatrix zero(const PadicContext& ctx, std::size_t rows, std::size_t cols);
  static PadicMatrix identity(const PadicContext& ctx, std::size_t n);
  static PadicMatrix from_rationals(const PadicContext& ctx, const std::vector<std::vector<Rational>>& rows);
  static PadicMatrix scalar(const PadicContext& ctx, std::size_t n, const PadicScalar& c);

  const PadicContext& context() const { return ctx_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  PadicScalar& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const PadicScalar& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  PadicMatrix operator+(const PadicMatrix& o) const;
  PadicMatrix operator-(const PadicMatrix& o) const;
  PadicMatrix operator-() const;
  PadicMatrix operator*(const PadicMatrix& o) const;
  PadicMatrix operator*(const PadicScalar& c) const;
  PadicMatrix& operator+=(const PadicMatrix& o) { return *this = *this + o; }
  PadicMatrix& operator-=(const PadicMatrix& o) { return *this = *this - o; }

  PadicMatrix transpose() const;
  PadicMatrix pow(int k) const;
  PadicMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  PadicMatrix column(std::size_t j) const { return block(0, j, rows_, 1); }
  void set_block(std::size_t r0, std::size_t c0, const PadicMatrix& b);
  static PadicMatrix hconcat(const PadicMatrix& a, const PadicMatrix& b);
  static PadicMatrix vconcat(const PadicMatrix& a, const PadicMatrix& b);
  static PadicMatrix kronecker(const PadicMatrix& a, const PadicMatrix& b);

  NormValue norm() const;
  bool is_zero() const;
  bool equals(const PadicMatrix& o) const { return (*this - o).is_zero(); }
  std::int64_t min_precision() const;

 private:
  void require_shape(const PadicMatrix& o, const char* what) const;

  PadicContext ctx_;
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<PadicScalar> a_;
};

// Rank at tracked precision (entries indistinguishable from zero count as zero).
std::size_t rank(const PadicMatrix& a);
// Columns form a basis of the right kernel.
PadicMatrix kernel(const PadicMatrix& a);
// Inverse of a square matrix; "not invertible" if singular at precision.
PadicMatrix inverse(const PadicMatrix& a);
// Solution X of A X = B for square invertible A.
PadicMatrix solve(const PadicMatrix& a, const PadicMatrix& b);
// Indices of a maximal independent subset of columns, chosen greedily left to right.
std::vector<std::size_t> independent_columns(const PadicMatrix& a);

}  // namespace lognabla
