#include "lognabla/matrix.hpp"

#include "lognabla/error.hpp"

#include <algorithm>

namespace lognabla {

PadicMatrix::PadicMatrix(const PadicContext& ctx, std::size_t rows, std::size_t cols)
    : ctx_(ctx), rows_(rows), cols_(cols), a_(rows * cols, PadicScalar::exact_zero(ctx)) {}

PadicMatrix PadicMatrix::zero(const PadicContext& ctx, std::size_t rows, std::size_t cols) {
  return PadicMatrix(ctx, rows, cols);
}

PadicMatrix PadicMatrix::identity(const PadicContext& ctx, std::size_t n) {
  return scalar(ctx, n, PadicScalar::from_int(ctx, 1));
}

PadicMatrix PadicMatrix::scalar(const PadicContext& ctx, std::size_t n, const PadicScalar& c) {
  PadicMatrix m(ctx, n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = c;
  return m;
}

PadicMatrix PadicMatrix::from_rationals(const PadicContext& ctx, const std::vector<std::vector<Rational>>& rows) {
  std::size_t r = rows.size(), c = r ? rows[0].size() : 0;
  PadicMatrix m(ctx, r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c) throw Error(ErrorKind::shape_mismatch, "ragged matrix rows");
    for (std::size_t j = 0; j < c; ++j) m(i, j) = PadicScalar::from_rational(ctx, rows[i][j]);
  }
  return m;
}

void PadicMatrix::require_shape(const PadicMatrix& o, const char* what) const {
  if (rows_ != o.rows_ || cols_ != o.cols_)
    throw Error(ErrorKind::shape_mismatch, std::string(what) + ": " + std::to_string(rows_) + "x" +
                                               std::to_string(cols_) + " vs " + std::to_string(o.rows_) + "x" +
                                               std::to_string(o.cols_));
}

PadicMatrix PadicMatrix::operator+(const PadicMatrix& o) const {
  require_shape(o, "matrix sum");
  PadicMatrix r(*this);
  for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] += o.a_[k];
  return r;
}

PadicMatrix PadicMatrix::operator-(const PadicMatrix& o) const {
  require_shape(o, "matrix difference");
  PadicMatrix r(*this);
  for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] -= o.a_[k];
  return r;
}

PadicMatrix PadicMatrix::operator-() const {
  PadicMatrix r(*this);
  for (auto& x : r.a_) x = -x;
  return r;
}

PadicMatrix PadicMatrix::operator*(const PadicMatrix& o) const {
  if (cols_ != o.rows_) throw Error(ErrorKind::shape_mismatch, "matrix product inner dimensions");
  PadicMatrix r(ctx_, rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const PadicScalar& x = (*this)(i, k);
      if (x.is_exact_zero()) continue;
      for (std::size_t j = 0; j < o.cols_; ++j) {
        const PadicScalar& y = o(k, j);
        if (y.is_exact_zero()) continue;
        r(i, j) += x * y;
      }
    }
  return r;
}

PadicMatrix PadicMatrix::operator*(const PadicScalar& c) const {
  PadicMatrix r(*this);
  for (auto& x : r.a_) x *= c;
  return r;
}

PadicMatrix PadicMatrix::transpose() const {
  PadicMatrix r(ctx_, cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
  return r;
}

PadicMatrix PadicMatrix::pow(int k) const {
  if (!square()) throw Error(ErrorKind::shape_mismatch, "power of a non-square matrix");
  if (k < 0) return inverse(*this).pow(-k);
  PadicMatrix result = identity(ctx_, rows_), base = *this;
  while (k > 0) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k) base = base * base;
  }
  return result;
}

PadicMatrix PadicMatrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) throw Error(ErrorKind::shape_mismatch, "block out of range");
  PadicMatrix b(ctx_, nr, nc);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
  return b;
}

void PadicMatrix::set_block(std::size_t r0, std::size_t c0, const PadicMatrix& b) {
  if (r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_) throw Error(ErrorKind::shape_mismatch, "block out of range");
  for (std::size_t i = 0; i < b.rows_; ++i)
    for (std::size_t j = 0; j < b.cols_; ++j) (*this)(r0 + i, c0 + j) = b(i, j);
}

PadicMatrix PadicMatrix::hconcat(const PadicMatrix& a, const PadicMatrix& b) {
  if (a.cols_ == 0) return b;
  if (b.cols_ == 0) return a;
  if (a.rows_ != b.rows_) throw Error(ErrorKind::shape_mismatch, "hconcat row counts");
  PadicMatrix r(a.ctx_, a.rows_, a.cols_ + b.cols_);
  r.set_block(0, 0, a);
  r.set_block(0, a.cols_, b);
  return r;
}

PadicMatrix PadicMatrix::vconcat(const PadicMatrix& a, const PadicMatrix& b) {
  if (a.rows_ == 0) return b;
  if (b.rows_ == 0) return a;
  if (a.cols_ != b.cols_) throw Error(ErrorKind::shape_mismatch, "vconcat column counts");
  PadicMatrix r(a.ctx_, a.rows_ + b.rows_, a.cols_);
  r.set_block(0, 0, a);
  r.set_block(a.rows_, 0, b);
  return r;
}

PadicMatrix PadicMatrix::kronecker(const PadicMatrix& a, const PadicMatrix& b) {
  PadicMatrix r(a.ctx_, a.rows_ * b.rows_, a.cols_ * b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t j = 0; j < a.cols_; ++j) {
      if (a(i, j).is_exact_zero()) continue;
      for (std::size_t k = 0; k < b.rows_; ++k)
        for (std::size_t l = 0; l < b.cols_; ++l) r(i * b.rows_ + k, j * b.cols_ + l) = a(i, j) * b(k, l);
    }
  return r;
}

NormValue PadicMatrix::norm() const {
  NormValue n = NormValue::zero();
  for (const auto& x : a_) n = max(n, x.norm());
  return n;
}

bool PadicMatrix::is_zero() const {
  return std::all_of(a_.begin(), a_.end(), [](const PadicScalar& x) { return x.is_zero(); });
}

std::int64_t PadicMatrix::min_precision() const {
  std::int64_t m = PadicScalar::kInfinite;
  for (const auto& x : a_) m = std::min(m, x.precision());
  return m;
}

// ---------------------------------------------------------------- elimination

namespace {

struct Echelon {
  PadicMatrix m;
  std::vector<std::size_t> pivots;  // pivot column per pivot row
};

// Reduced row echelon form. Pivot choice: smallest valuation in the column.
Echelon rref(PadicMatrix m) {
  Echelon e;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t best = m.rows();
    std::int64_t best_v = 0;
    for (std::size_t i = row; i < m.rows(); ++i) {
      auto v = m(i, col).valuation();
      if (v && (best == m.rows() || *v < best_v)) {
        best = i;
        best_v = *v;
      }
    }
    if (best == m.rows()) continue;
    if (best != row)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(best, j), m(row, j));
    PadicScalar piv = m(row, col);
    for (std::size_t j = col; j < m.cols(); ++j) m(row, j) /= piv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row || m(i, col).is_exact_zero()) continue;
      PadicScalar f = m(i, col);
      for (std::size_t j = col; j < m.cols(); ++j) m(i, j) -= f * m(row, j);
    }
    e.pivots.push_back(col);
    ++row;
  }
  e.m = std::move(m);
  return e;
}

}  // namespace

std::size_t rank(const PadicMatrix& a) { return rref(a).pivots.size(); }

std::vector<std::size_t> independent_columns(const PadicMatrix& a) { return rref(a).pivots; }

PadicMatrix kernel(const PadicMatrix& a) {
  Echelon e = rref(a);
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto c : e.pivots) is_pivot[c] = true;
  std::vector<std::size_t> free;
  for (std::size_t c = 0; c < a.cols(); ++c)
    if (!is_pivot[c]) free.push_back(c);
  PadicMatrix k(a.context(), a.cols(), free.size());
  for (std::size_t f = 0; f < free.size(); ++f) {
    k(free[f], f) = PadicScalar::from_int(a.context(), 1);
    for (std::size_t r = 0; r < e.pivots.size(); ++r) k(e.pivots[r], f) = -e.m(r, free[f]);
  }
  return k;
}

PadicMatrix solve(const PadicMatrix& a, const PadicMatrix& b) {
  if (!a.square() || a.rows() != b.rows()) throw Error(ErrorKind::shape_mismatch, "solve shapes");
  std::size_t n = a.rows();
  Echelon e = rref(PadicMatrix::hconcat(a, b));
  if (e.pivots.size() < n || e.pivots[n - 1] != n - 1)
    throw Error(ErrorKind::not_invertible, "matrix is singular at tracked precision");
  return e.m.block(0, n, n, b.cols());
}

PadicMatrix inverse(const PadicMatrix& a) {
  if (!a.square()) throw Error(ErrorKind::shape_mismatch, "inverse of a non-square matrix");
  return solve(a, PadicMatrix::identity(a.context(), a.rows()));
}

}  // namespace lognabla
