#pragma once

#include <optional>
#include <vector>

#include "galois/berkowitz.hpp"
#include "galois/ring_parse.hpp"
#include "galois/smith.hpp"

namespace galois {

using ElemMatrix = Matrix<Element>;
using ElemVector = std::vector<Element>;

inline ElemMatrix zero_matrix(const RingPtr& r, std::size_t rows, std::size_t cols) {
  return ElemMatrix(rows, cols, Element::zero(r));
}
inline ElemMatrix identity_matrix(const RingPtr& r, std::size_t n) {
  return ElemMatrix::identity(n, Element::zero(r), Element::one(r));
}
inline ElemMatrix mat_mul(const ElemMatrix& a, const ElemMatrix& b, const RingPtr& r) {
  return multiply(a, b, Element::zero(r));
}
inline ElemMatrix kron(const ElemMatrix& a, const ElemMatrix& b, const RingPtr& r) {
  return kronecker(a, b, Element::zero(r));
}
inline ElemVector mat_vec(const ElemMatrix& a, const ElemVector& v, const RingPtr& r) {
  ElemVector out(a.rows(), Element::zero(r));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out[i] = out[i] + a(i, j) * v[j];
  return out;
}
inline ElemMatrix scale(const ElemMatrix& a, const Element& c) {
  return a.map([&](const Element& x) { return c * x; });
}
inline bool is_zero_matrix(const ElemMatrix& a) {
  for (const auto& x : a.data())
    if (!x.is_zero()) return false;
  return true;
}

inline Element det(const ElemMatrix& a, const RingPtr& r) {
  return determinant(a, Element::zero(r), Element::one(r));
}

/// Inverse of a square matrix whose determinant is a unit; nullopt if the
/// determinant is decided not to be a unit, Error(Undecided) if unit
/// recognition cannot decide.
inline std::optional<ElemMatrix> inverse(const ElemMatrix& a, const RingPtr& r) {
  const std::size_t n = a.rows();
  if (n != a.cols()) throw Error(ErrorCode::ShapeMismatch, "inverse of non-square matrix");
  if (n == 0) return a;
  auto d = is_unit(det(a, r));
  if (d.status == UnitStatus::NonUnit) return std::nullopt;
  if (d.status == UnitStatus::Undecided) throw Error(ErrorCode::Undecided, "determinant unit test");
  ElemMatrix inv = scale(adjugate(a, Element::zero(r), Element::one(r)), *d.inverse);
  if (mat_mul(a, inv, r) != identity_matrix(r, n))
    throw Error(ErrorCode::InternalContradiction, "adjugate inverse check");
  return inv;
}

// ---------------------------------------------------------------------------
// Linear algebra over the effective principal ideal rings Z, Z[1/n], Q, GF(p), Z/m.

inline std::shared_ptr<const ScalarRing> as_pid(const RingPtr& r) {
  return std::dynamic_pointer_cast<const ScalarRing>(r);
}

namespace detail {

inline Integer lcm_den(const std::vector<Element>& xs) {
  Integer l = 1;
  for (const auto& x : xs) l = lcm(l, x.value().scalar().get_den());
  return l;
}

/// Integer matrix with the same row space equations as a (rows scaled by
/// nonzero integers); for finite rings the entries are the canonical lifts.
inline Matrix<Integer> integer_rows(const ElemMatrix& a) {
  Matrix<Integer> out(a.rows(), a.cols(), 0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Integer c = lcm_den(a.row(i));
    for (std::size_t j = 0; j < a.cols(); ++j) {
      Rational q = a(i, j).value().scalar() * c;
      out(i, j) = q.get_num();
    }
  }
  return out;
}

inline Element to_elem(const RingPtr& r, const Rational& q) {
  auto s = as_pid(r);
  auto v = s->from_rational(q);
  if (!v) throw Error(ErrorCode::InternalContradiction, "scalar image of " + to_string(q));
  return Element(r, Value(*v));
}

}  // namespace detail

/// Generators (columns) of {x in R^n : A x = 0}.
inline ElemMatrix pid_kernel(const ElemMatrix& a, const RingPtr& r) {
  auto s = as_pid(r);
  if (!s) throw Error(ErrorCode::UnsupportedBase, "kernel over " + r->key());
  const std::size_t n = a.cols();
  Matrix<Integer> k;
  if (s->finite()) {
    Matrix<Integer> lifted = detail::integer_rows(a);
    Matrix<Integer> ext(a.rows(), n + a.rows(), 0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
      for (std::size_t j = 0; j < n; ++j) ext(i, j) = lifted(i, j);
      ext(i, n + i) = s->modulus();
    }
    Matrix<Integer> full = integer_kernel(ext);
    k = Matrix<Integer>(n, full.cols(), 0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < full.cols(); ++j) k(i, j) = full(i, j);
  } else {
    k = integer_kernel(detail::integer_rows(a));
  }
  ElemMatrix out = zero_matrix(r, n, k.cols());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < k.cols(); ++j) out(i, j) = detail::to_elem(r, Rational(k(i, j)));
  return out;
}

/// Some x in R^n with A x = b, if one exists.
inline std::optional<ElemVector> pid_solve(const ElemMatrix& a, const ElemVector& b, const RingPtr& r) {
  auto s = as_pid(r);
  if (!s) throw Error(ErrorCode::UnsupportedBase, "solve over " + r->key());
  const std::size_t m = a.rows(), n = a.cols();
  if (b.size() != m) throw Error(ErrorCode::ShapeMismatch, "pid_solve");
  if (s->finite()) {
    Matrix<Integer> ext(m, n + m, 0);
    std::vector<Integer> rhs(m);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) ext(i, j) = a(i, j).value().scalar().get_num();
      ext(i, n + i) = s->modulus();
      rhs[i] = b[i].value().scalar().get_num();
    }
    auto x = integer_solve(ext, rhs);
    if (!x) return std::nullopt;
    ElemVector out;
    for (std::size_t j = 0; j < n; ++j) out.push_back(detail::to_elem(r, Rational((*x)[j])));
    return out;
  }
  // scale each equation by a common denominator, then solve through the Smith form
  Matrix<Integer> az(m, n, 0);
  std::vector<Rational> bz(m);
  for (std::size_t i = 0; i < m; ++i) {
    auto row = a.row(i);
    row.push_back(b[i]);
    Integer c = detail::lcm_den(row);
    for (std::size_t j = 0; j < n; ++j) az(i, j) = Rational(a(i, j).value().scalar() * c).get_num();
    bz[i] = b[i].value().scalar() * c;
  }
  if (m == 0) return ElemVector(n, Element::zero(r));
  auto sf = smith_normal_form(az);
  std::vector<Rational> ub(m, 0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < m; ++k) ub[i] += Rational(sf.U(i, k)) * bz[k];
  std::vector<Rational> y(n, 0);
  for (std::size_t i = 0; i < m; ++i) {
    if (i < sf.rank) {
      Rational q = ub[i] / Rational(sf.D(i, i));
      if (!s->from_rational(q)) return std::nullopt;
      y[i] = q;
    } else if (ub[i] != 0) {
      return std::nullopt;
    }
  }
  ElemVector out;
  for (std::size_t i = 0; i < n; ++i) {
    Rational x = 0;
    for (std::size_t j = 0; j < sf.rank; ++j) x += Rational(sf.V(i, j)) * y[j];
    out.push_back(detail::to_elem(r, x));
  }
  return out;
}

/// Smith form over a scalar PID: U A V = D with U, V invertible over R and
/// the diagonal normalized (1 for units, gcd-with-modulus for Z/m, the
/// non-inverted part for Z[1/n]).
struct PidSmith {
  ElemMatrix U, D, V;
  std::size_t rank = 0;
};

inline PidSmith pid_smith(const ElemMatrix& a, const RingPtr& r) {
  auto s = as_pid(r);
  if (!s) throw Error(ErrorCode::UnsupportedBase, "Smith normal form over " + r->key());
  const std::size_t m = a.rows(), n = a.cols();
  Integer c = detail::lcm_den(a.data());
  Matrix<Integer> az(m, n, 0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) az(i, j) = Rational(a(i, j).value().scalar() * c).get_num();
  auto sf = smith_normal_form(az);
  auto lift = [&](const Matrix<Integer>& x) {
    return x.map([&](const Integer& v) { return detail::to_elem(r, Rational(v)); });
  };
  PidSmith out;
  out.U = lift(sf.U);
  out.V = lift(sf.V);
  out.D = zero_matrix(r, m, n);
  // D_R = D_Z / c; move the unit part of each diagonal entry into U
  for (std::size_t i = 0; i < std::min(m, n); ++i) {
    Element d = detail::to_elem(r, Rational(sf.D(i, i)) / Rational(c));
    if (d.is_zero()) continue;
    Element normal = d;
    switch (s->scalar_kind()) {
      case ScalarKind::Rationals:
      case ScalarKind::PrimeField: normal = Element::one(r); break;
      case ScalarKind::Integers: normal = Element::integer(r, abs(d.value().scalar().get_num())); break;
      case ScalarKind::Localized:
        normal = Element::integer(r, abs(strip_primes(d.value().scalar().get_num(), s->inverted_primes())));
        break;
      case ScalarKind::Residue: {
        Integer g = gcd(d.value().scalar().get_num(), s->modulus());
        normal = Element::integer(r, g);
        break;
      }
    }
    std::optional<Element> uinv;
    if (s->scalar_kind() == ScalarKind::Residue) {
      // d = normal * u for some unit u mod m
      for (Integer k = 1; k < s->modulus(); ++k) {
        Element u = Element::integer(r, k);
        auto iu = is_unit(u);
        if (iu.is_unit() && normal * u == d) {
          uinv = *iu.inverse;
          break;
        }
      }
    } else {
      Rational q = d.value().scalar() / normal.value().scalar();
      uinv = detail::to_elem(r, 1 / q);
    }
    for (std::size_t j = 0; j < m; ++j) out.U(i, j) = *uinv * out.U(i, j);
    out.D(i, i) = normal;
    ++out.rank;
  }
  return out;
}

/// Generator of the ideal spanned by xs in a scalar PID, with coefficients.
inline std::pair<Element, ElemVector> pid_ideal_generator(const ElemVector& xs, const RingPtr& r) {
  ElemMatrix row = zero_matrix(r, 1, xs.size());
  for (std::size_t j = 0; j < xs.size(); ++j) row(0, j) = xs[j];
  auto sf = pid_smith(row, r);
  Element g = sf.rank ? sf.D(0, 0) : Element::zero(r);
  auto coeffs = pid_solve(row, {g}, r);
  return {g, *coeffs};
}

}  // namespace galois
