#pragma once

#include <cstddef>
#include <vector>

#include "galois/matrix.hpp"

namespace galois {

/// Characteristic polynomial det(tI - A) by Berkowitz's division-free
/// algorithm. Coefficients are returned highest degree first, so out[0] = 1
/// and out[n] = (-1)^n det(A). Works over any commutative ring.
template <class T>
std::vector<T> charpoly(const Matrix<T>& a, const T& zero, const T& one) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw Error(ErrorCode::ShapeMismatch, "charpoly of non-square matrix");
  if (n == 0) return {one};
  std::vector<T> c = {one, zero - a(0, 0)};
  for (std::size_t r = 1; r < n; ++r) {
    // column S = a(0..r-1, r), row R = a(r, 0..r-1), leading block M = a(0..r-1, 0..r-1)
    std::vector<T> s(r, zero);
    for (std::size_t i = 0; i < r; ++i) s[i] = a(i, r);
    std::vector<T> q(r + 2, zero);
    q[0] = one;
    q[1] = zero - a(r, r);
    std::vector<T> v = s;  // M^k S
    for (std::size_t k = 0; k + 2 < r + 2; ++k) {
      T dot = zero;
      for (std::size_t i = 0; i < r; ++i) dot = dot + a(r, i) * v[i];
      q[k + 2] = zero - dot;
      if (k + 3 >= r + 2) break;
      std::vector<T> w(r, zero);
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) w[i] = w[i] + a(i, j) * v[j];
      v = std::move(w);
    }
    // lower-triangular Toeplitz (r+2) x (r+1) times c (length r+1)
    std::vector<T> next(r + 2, zero);
    for (std::size_t i = 0; i < r + 2; ++i)
      for (std::size_t j = 0; j <= i && j < c.size(); ++j) next[i] = next[i] + q[i - j] * c[j];
    c = std::move(next);
  }
  return c;
}

template <class T>
T determinant(const Matrix<T>& a, const T& zero, const T& one) {
  auto c = charpoly(a, zero, one);
  T d = c.back();
  return (a.rows() % 2 == 0) ? d : zero - d;
}

/// Adjugate via cofactors; each minor uses the division-free determinant.
template <class T>
Matrix<T> adjugate(const Matrix<T>& a, const T& zero, const T& one) {
  const std::size_t n = a.rows();
  Matrix<T> adj(n, n, zero);
  if (n == 1) {
    adj(0, 0) = one;
    return adj;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Matrix<T> minor(n - 1, n - 1, zero);
      for (std::size_t r = 0, rr = 0; r < n; ++r) {
        if (r == i) continue;
        for (std::size_t c = 0, cc = 0; c < n; ++c) {
          if (c == j) continue;
          minor(rr, cc++) = a(r, c);
        }
        ++rr;
      }
      T d = determinant(minor, zero, one);
      adj(j, i) = ((i + j) % 2 == 0) ? d : zero - d;
    }
  return adj;
}

}  // namespace galois
