#pragma once

// Dense exact linear algebra over Q and Q(zeta_M).

#include <gmpxx.h>

#include <optional>
#include <utility>
#include <vector>

#include "classinv/cyclo.hpp"

namespace classinv {

template <class F>
struct FieldOps;

template <>
struct FieldOps<mpq_class> {
  static bool is_zero(const mpq_class& x) { return x == 0; }
  static mpq_class inv(const mpq_class& x) { return 1 / x; }
  static mpq_class zero_like(const mpq_class&) { return 0; }
  static mpq_class one_like(const mpq_class&) { return 1; }
};

template <>
struct FieldOps<CycloNum> {
  static bool is_zero(const CycloNum& x) { return x.is_zero(); }
  static CycloNum inv(const CycloNum& x) { return x.inv(); }
  static CycloNum zero_like(const CycloNum& x) { return CycloNum(x.modulus()); }
  static CycloNum one_like(const CycloNum& x) { return CycloNum::one(x.modulus()); }
};

template <class F>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const F& zero) : rows_(rows), cols_(cols), a_(rows * cols, zero) {}

  static Matrix identity(std::size_t n, const F& zero) {
    Matrix m(n, n, zero);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = FieldOps<F>::one_like(zero);
    return m;
  }
  /// Matrix whose columns are the given vectors (all of length `rows`).
  static Matrix from_columns(const std::vector<std::vector<F>>& cols, std::size_t rows, const F& zero) {
    Matrix m(rows, cols.size(), zero);
    for (std::size_t c = 0; c < cols.size(); ++c)
      for (std::size_t r = 0; r < rows; ++r) m(r, c) = cols[c][r];
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  F& operator()(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
  const F& operator()(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

  std::vector<F> column(std::size_t c) const {
    std::vector<F> v;
    v.reserve(rows_);
    for (std::size_t r = 0; r < rows_; ++r) v.push_back((*this)(r, c));
    return v;
  }

  friend Matrix operator*(const Matrix& x, const Matrix& y) {
    require(x.cols_ == y.rows_, "Matrix: shape mismatch");
    Matrix out(x.rows_, y.cols_, FieldOps<F>::zero_like(x.a_.empty() ? y.a_.front() : x.a_.front()));
    for (std::size_t i = 0; i < x.rows_; ++i)
      for (std::size_t k = 0; k < x.cols_; ++k) {
        if (FieldOps<F>::is_zero(x(i, k))) continue;
        for (std::size_t j = 0; j < y.cols_; ++j)
          if (!FieldOps<F>::is_zero(y(k, j))) out(i, j) += x(i, k) * y(k, j);
      }
    return out;
  }
  friend bool operator==(const Matrix& x, const Matrix& y) { return x.rows_ == y.rows_ && x.cols_ == y.cols_ && x.a_ == y.a_; }

  std::vector<F>& data() { return a_; }
  const std::vector<F>& data() const { return a_; }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<F> a_;
};

/// In-place reduced row echelon form; returns the pivot columns.
template <class F>
std::vector<std::size_t> rref(Matrix<F>& m) {
  std::vector<std::size_t> piv;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && FieldOps<F>::is_zero(m(p, c))) ++p;
    if (p == m.rows()) continue;
    if (p != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
    const F s = FieldOps<F>::inv(m(r, c));
    for (std::size_t j = c; j < m.cols(); ++j)
      if (!FieldOps<F>::is_zero(m(r, j))) m(r, j) = m(r, j) * s;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || FieldOps<F>::is_zero(m(i, c))) continue;
      const F f = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j)
        if (!FieldOps<F>::is_zero(m(r, j))) m(i, j) -= f * m(r, j);
    }
    piv.push_back(c);
    ++r;
  }
  return piv;
}

template <class F>
std::size_t rank(Matrix<F> m) {
  return rref(m).size();
}

/// Basis of {x : m x = 0}.
template <class F>
std::vector<std::vector<F>> nullspace(Matrix<F> m, const F& zero) {
  auto piv = rref(m);
  std::vector<bool> is_piv(m.cols(), false);
  for (auto c : piv) is_piv[c] = true;
  std::vector<std::vector<F>> out;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_piv[f]) continue;
    std::vector<F> v(m.cols(), zero);
    v[f] = FieldOps<F>::one_like(zero);
    for (std::size_t i = 0; i < piv.size(); ++i) v[piv[i]] = -m(i, f);
    out.push_back(std::move(v));
  }
  return out;
}

template <class F>
std::optional<Matrix<F>> inverse(const Matrix<F>& m, const F& zero) {
  require(m.rows() == m.cols(), "inverse: matrix is not square");
  const std::size_t n = m.rows();
  Matrix<F> aug(n, 2 * n, zero);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = FieldOps<F>::one_like(zero);
  }
  auto piv = rref(aug);
  if (piv.size() < n || piv[n - 1] != n - 1) return std::nullopt;
  Matrix<F> out(n, n, zero);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = aug(i, n + j);
  return out;
}

/// Some x with m x = b, or nothing if inconsistent.
template <class F>
std::optional<std::vector<F>> solve(const Matrix<F>& m, const std::vector<F>& b, const F& zero) {
  Matrix<F> aug(m.rows(), m.cols() + 1, zero);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
    aug(i, m.cols()) = b[i];
  }
  auto piv = rref(aug);
  if (!piv.empty() && piv.back() == m.cols()) return std::nullopt;
  std::vector<F> x(m.cols(), zero);
  for (std::size_t i = 0; i < piv.size(); ++i) x[piv[i]] = aug(i, m.cols());
  return x;
}

/// Nonzero rows of the RREF of the row vectors: a canonical basis of their span.
template <class F>
std::vector<std::vector<F>> row_space_basis(const std::vector<std::vector<F>>& rows, std::size_t width, const F& zero) {
  Matrix<F> m(rows.size(), width, zero);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < width; ++j) m(i, j) = rows[i][j];
  auto piv = rref(m);
  std::vector<std::vector<F>> out;
  for (std::size_t i = 0; i < piv.size(); ++i) {
    std::vector<F> v;
    for (std::size_t j = 0; j < width; ++j) v.push_back(m(i, j));
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace classinv
