#pragma once

#include <cstddef>
#include <functional>
#include <ostream>
#include <utility>
#include <vector>

#include "galois/error.hpp"

namespace galois {

/// Dense row-major matrix over an arbitrary value type.
///
/// The type carries no ring context of its own: operations that need a zero
/// (multiplication, Kronecker products) take it explicitly so that the same
/// template works for machine integers, GMP numbers and runtime ring elements.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<T> row(std::size_t i) const {
    return std::vector<T>(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
  }
  std::vector<T> column(std::size_t j) const {
    std::vector<T> out;
    out.reserve(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out.push_back((*this)(i, j));
    return out;
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }

  bool operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

  static Matrix identity(std::size_t n, const T& zero, const T& one) {
    Matrix m(n, n, zero);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = one;
    return m;
  }

  static Matrix from_columns(const std::vector<std::vector<T>>& cols, std::size_t rows,
                             const T& zero) {
    Matrix m(rows, cols.size(), zero);
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (cols[j].size() != rows) throw Error(ErrorCode::ShapeMismatch, "column length");
      for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
    }
    return m;
  }

  template <class F>
  auto map(F&& f) const -> Matrix<decltype(f(std::declval<const T&>()))> {
    using U = decltype(f(std::declval<const T&>()));
    Matrix<U> out;
    out.rows_ = rows_;
    out.cols_ = cols_;
    out.data_.reserve(data_.size());
    for (const auto& x : data_) out.data_.push_back(f(x));
    return out;
  }

  const std::vector<T>& data() const noexcept { return data_; }

 private:
  template <class U>
  friend class Matrix;

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

template <class T>
Matrix<T> transpose(const Matrix<T>& m) {
  if (m.rows() == 0 || m.cols() == 0) {
    // keep shape information for empty matrices
    return Matrix<T>(m.cols(), m.rows(), T{});
  }
  Matrix<T> out(m.cols(), m.rows(), m(0, 0));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(j, i) = m(i, j);
  return out;
}

template <class T>
Matrix<T> multiply(const Matrix<T>& a, const Matrix<T>& b, const T& zero) {
  if (a.cols() != b.rows()) throw Error(ErrorCode::ShapeMismatch, "matrix product");
  Matrix<T> out(a.rows(), b.cols(), zero);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const T& aik = a(i, k);
      if (aik == zero) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) = out(i, j) + aik * b(k, j);
    }
  return out;
}

template <class T>
Matrix<T> add(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(ErrorCode::ShapeMismatch, "matrix sum");
  Matrix<T> out = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) + b(i, j);
  return out;
}

template <class T>
Matrix<T> subtract(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(ErrorCode::ShapeMismatch, "matrix difference");
  Matrix<T> out = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) - b(i, j);
  return out;
}

/// Kronecker product; index (i1,i2) of the result is i1 * b.rows() + i2.
template <class T>
Matrix<T> kronecker(const Matrix<T>& a, const Matrix<T>& b, const T& zero) {
  Matrix<T> out(a.rows() * b.rows(), a.cols() * b.cols(), zero);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (a(i, j) == zero) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    }
  return out;
}

template <class T>
Matrix<T> hstack(const Matrix<T>& a, const Matrix<T>& b, const T& zero) {
  if (a.rows() != b.rows()) throw Error(ErrorCode::ShapeMismatch, "hstack");
  Matrix<T> out(a.rows(), a.cols() + b.cols(), zero);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) out(i, a.cols() + j) = b(i, j);
  }
  return out;
}

template <class T>
Matrix<T> vstack(const Matrix<T>& a, const Matrix<T>& b, const T& zero) {
  if (a.cols() != b.cols()) throw Error(ErrorCode::ShapeMismatch, "vstack");
  Matrix<T> out(a.rows() + b.rows(), a.cols(), zero);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) out(a.rows() + i, j) = b(i, j);
  return out;
}

template <class T>
std::ostream& operator<<(std::ostream& os, const Matrix<T>& m) {
  os << '[';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << (i ? ", [" : "[");
    for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? ", " : "") << m(i, j);
    os << ']';
  }
  return os << ']';
}

}  // namespace galois
