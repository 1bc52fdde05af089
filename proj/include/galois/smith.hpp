#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "galois/integer.hpp"
#include "galois/matrix.hpp"

namespace galois {

/// U * A * V = D with U, V unimodular and D diagonal with d_1 | d_2 | ... (d_i >= 0).
/// The inverses are tracked alongside so callers can move between bases in
/// both directions without a second elimination.
template <class Int>
struct SmithForm {
  Matrix<Int> U, Uinv, D, V, Vinv;
  std::size_t rank = 0;

  std::vector<Int> diagonal() const {
    std::vector<Int> out;
    for (std::size_t i = 0; i < std::min(D.rows(), D.cols()); ++i) out.push_back(D(i, i));
    return out;
  }
};

struct SmithOptions {
  bool left = true;   // compute U, Uinv
  bool right = true;  // compute V, Vinv
};

namespace detail {

template <class Int>
class SmithEngine {
 public:
  SmithEngine(Matrix<Int> a, SmithOptions opt) : a_(std::move(a)), opt_(opt) {
    const std::size_t m = a_.rows(), n = a_.cols();
    if (opt_.left) {
      u_ = Matrix<Int>::identity(m, Int(0), Int(1));
      uinv_ = u_;
    }
    if (opt_.right) {
      v_ = Matrix<Int>::identity(n, Int(0), Int(1));
      vinv_ = v_;
    }
  }

  SmithForm<Int> run() {
    const std::size_t m = a_.rows(), n = a_.cols();
    std::size_t t = 0;
    while (t < std::min(m, n)) {
      if (!select_pivot(t, t, m, t, n)) break;
      for (;;) {
        bool clean = true;
        const Int p = a_(t, t);
        for (std::size_t i = t + 1; i < m; ++i) {
          if (a_(i, t) == Int(0)) continue;
          row_axpy(i, t, -floor_div(a_(i, t), p));
          if (a_(i, t) != Int(0)) clean = false;
        }
        for (std::size_t j = t + 1; j < n; ++j) {
          if (a_(t, j) == Int(0)) continue;
          col_axpy(j, t, -floor_div(a_(t, j), p));
          if (a_(t, j) != Int(0)) clean = false;
        }
        if (!clean) {
          // remainders are smaller than the pivot; pick the best of row/column t
          reselect_in_cross(t, m, n);
          continue;
        }
        bool divisible = true;
        for (std::size_t i = t + 1; i < m && divisible; ++i)
          for (std::size_t j = t + 1; j < n; ++j) {
            if (a_(i, j) == Int(0)) continue;
            if (a_(i, j) - floor_div(a_(i, j), p) * p != Int(0)) {
              row_axpy(t, i, Int(1));
              divisible = false;
              break;
            }
          }
        if (divisible) break;
      }
      if (a_(t, t) < Int(0)) negate_row(t);
      ++t;
    }
    SmithForm<Int> out;
    out.rank = t;
    out.D = std::move(a_);
    out.U = std::move(u_);
    out.Uinv = std::move(uinv_);
    out.V = std::move(v_);
    out.Vinv = std::move(vinv_);
    return out;
  }

 private:
  // Smallest nonzero |entry| in the block, ties broken by lowest row then column.
  bool select_pivot(std::size_t t, std::size_t r0, std::size_t r1, std::size_t c0,
                    std::size_t c1) {
    std::optional<std::pair<std::size_t, std::size_t>> best;
    Int best_abs(0);
    for (std::size_t i = r0; i < r1; ++i)
      for (std::size_t j = c0; j < c1; ++j) {
        if (a_(i, j) == Int(0)) continue;
        Int v = abs_value(a_(i, j));
        if (!best || v < best_abs) {
          best = {i, j};
          best_abs = v;
        }
      }
    if (!best) return false;
    swap_rows(t, best->first);
    swap_cols(t, best->second);
    return true;
  }

  void reselect_in_cross(std::size_t t, std::size_t m, std::size_t n) {
    std::size_t bi = t, bj = t;
    Int best = abs_value(a_(t, t));
    for (std::size_t i = t + 1; i < m; ++i) {
      if (a_(i, t) == Int(0)) continue;
      Int v = abs_value(a_(i, t));
      if (v < best) { best = v; bi = i; bj = t; }
    }
    for (std::size_t j = t + 1; j < n; ++j) {
      if (a_(t, j) == Int(0)) continue;
      Int v = abs_value(a_(t, j));
      if (v < best) { best = v; bi = t; bj = j; }
    }
    swap_rows(t, bi);
    swap_cols(t, bj);
  }

  void swap_rows(std::size_t i, std::size_t k) {
    if (i == k) return;
    a_.swap_rows(i, k);
    if (opt_.left) {
      u_.swap_rows(i, k);
      uinv_.swap_cols(i, k);
    }
  }
  void swap_cols(std::size_t j, std::size_t k) {
    if (j == k) return;
    a_.swap_cols(j, k);
    if (opt_.right) {
      v_.swap_cols(j, k);
      vinv_.swap_rows(j, k);
    }
  }
  // row_i += c * row_k
  void row_axpy(std::size_t i, std::size_t k, const Int& c) {
    if (c == Int(0)) return;
    for (std::size_t j = 0; j < a_.cols(); ++j)
      if (a_(k, j) != Int(0)) a_(i, j) = a_(i, j) + c * a_(k, j);
    if (opt_.left) {
      for (std::size_t j = 0; j < u_.cols(); ++j)
        if (u_(k, j) != Int(0)) u_(i, j) = u_(i, j) + c * u_(k, j);
      // inverse: col_k -= c * col_i
      for (std::size_t r = 0; r < uinv_.rows(); ++r)
        if (uinv_(r, i) != Int(0)) uinv_(r, k) = uinv_(r, k) - c * uinv_(r, i);
    }
  }
  // col_j += c * col_k
  void col_axpy(std::size_t j, std::size_t k, const Int& c) {
    if (c == Int(0)) return;
    for (std::size_t i = 0; i < a_.rows(); ++i)
      if (a_(i, k) != Int(0)) a_(i, j) = a_(i, j) + c * a_(i, k);
    if (opt_.right) {
      for (std::size_t i = 0; i < v_.rows(); ++i)
        if (v_(i, k) != Int(0)) v_(i, j) = v_(i, j) + c * v_(i, k);
      // inverse: row_k -= c * row_j
      for (std::size_t r = 0; r < vinv_.cols(); ++r)
        if (vinv_(j, r) != Int(0)) vinv_(k, r) = vinv_(k, r) - c * vinv_(j, r);
    }
  }
  void negate_row(std::size_t i) {
    for (std::size_t j = 0; j < a_.cols(); ++j) a_(i, j) = -a_(i, j);
    if (opt_.left) {
      for (std::size_t j = 0; j < u_.cols(); ++j) u_(i, j) = -u_(i, j);
      for (std::size_t r = 0; r < uinv_.rows(); ++r) uinv_(r, i) = -uinv_(r, i);
    }
  }

  Matrix<Int> a_, u_, uinv_, v_, vinv_;
  SmithOptions opt_;
};

inline Matrix<Integer> widen(const Matrix<CheckedInt>& m) {
  return m.map([](CheckedInt x) { return to_integer(x); });
}

}  // namespace detail

/// Smith normal form over Z. Runs on checked 64-bit integers and restarts
/// with GMP integers if any intermediate overflows.
inline SmithForm<Integer> smith_normal_form(const Matrix<Integer>& a, SmithOptions opt = {}) {
  bool small = true;
  for (const auto& x : a.data())
    if (!detail::fits_int64(x) || abs(x) > Integer(1) << 30) {
      small = false;
      break;
    }
  if (small) {
    try {
      auto narrow = a.map([](const Integer& x) { return CheckedInt(x.get_si()); });
      auto r = detail::SmithEngine<CheckedInt>(std::move(narrow), opt).run();
      SmithForm<Integer> out;
      out.rank = r.rank;
      out.D = detail::widen(r.D);
      out.U = detail::widen(r.U);
      out.Uinv = detail::widen(r.Uinv);
      out.V = detail::widen(r.V);
      out.Vinv = detail::widen(r.Vinv);
      return out;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::Overflow) throw;
    }
  }
  return detail::SmithEngine<Integer>(a, opt).run();
}

/// Basis (as columns) of the integer kernel {x : A x = 0}; saturated in Z^n.
inline Matrix<Integer> integer_kernel(const Matrix<Integer>& a) {
  const std::size_t n = a.cols();
  if (a.rows() == 0) return Matrix<Integer>::identity(n, 0, 1);
  auto s = smith_normal_form(a, {.left = false, .right = true});
  Matrix<Integer> k(n, n - s.rank, 0);
  for (std::size_t j = s.rank; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) k(i, j - s.rank) = s.V(i, j);
  return k;
}

/// Integer solution of A x = b, if one exists.
inline std::optional<std::vector<Integer>> integer_solve(const Matrix<Integer>& a,
                                                         const std::vector<Integer>& b) {
  if (b.size() != a.rows()) throw Error(ErrorCode::ShapeMismatch, "integer_solve");
  const std::size_t n = a.cols();
  if (a.rows() == 0) return std::vector<Integer>(n, 0);
  auto s = smith_normal_form(a);
  std::vector<Integer> ub(a.rows(), 0);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.rows(); ++k)
      if (s.U(i, k) != 0) ub[i] += s.U(i, k) * b[k];
  std::vector<Integer> y(n, 0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    if (i < s.rank) {
      if (ub[i] % s.D(i, i) != 0) return std::nullopt;
      y[i] = ub[i] / s.D(i, i);
    } else if (ub[i] != 0) {
      return std::nullopt;
    }
  }
  std::vector<Integer> x(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < s.rank; ++j)
      if (s.V(i, j) != 0) x[i] += s.V(i, j) * y[j];
  return x;
}

/// Column-style Hermite normal form of the lattice spanned by the columns of
/// `gens`: lower-triangular basis with positive pivots, entries left of each
/// pivot reduced into [0, pivot). Returns the basis columns and their pivot rows.
struct HermiteBasis {
  Matrix<Integer> basis;
  std::vector<std::size_t> pivot_rows;

  /// Canonical representative of v modulo the lattice: every pivot coordinate
  /// lands in [0, pivot).
  std::vector<Integer> reduce(std::vector<Integer> v) const {
    for (std::size_t c = 0; c < pivot_rows.size(); ++c) {
      const std::size_t r = pivot_rows[c];
      Integer q = detail::floor_div(v[r], basis(r, c));
      if (q == 0) continue;
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= q * basis(i, c);
    }
    return v;
  }
  bool contains(const std::vector<Integer>& v) const {
    auto r = reduce(v);
    return std::all_of(r.begin(), r.end(), [](const Integer& x) { return x == 0; });
  }
};

inline HermiteBasis hermite_basis(const Matrix<Integer>& gens) {
  const std::size_t m = gens.rows();
  std::vector<std::vector<Integer>> cols;
  for (std::size_t j = 0; j < gens.cols(); ++j) cols.push_back(gens.column(j));
  HermiteBasis out;
  std::vector<std::vector<Integer>> basis;
  std::size_t start = 0;
  for (std::size_t r = 0; r < m && start < cols.size(); ++r) {
    // gcd-eliminate row r among columns [start, end)
    for (;;) {
      std::optional<std::size_t> best;
      for (std::size_t j = start; j < cols.size(); ++j) {
        if (cols[j][r] == 0) continue;
        if (!best || abs(cols[j][r]) < abs(cols[*best][r])) best = j;
      }
      if (!best) break;
      std::swap(cols[start], cols[*best]);
      bool done = true;
      for (std::size_t j = start + 1; j < cols.size(); ++j) {
        if (cols[j][r] == 0) continue;
        Integer q = detail::floor_div(cols[j][r], cols[start][r]);
        for (std::size_t i = 0; i < m; ++i) cols[j][i] -= q * cols[start][i];
        if (cols[j][r] != 0) done = false;
      }
      if (done) break;
    }
    if (cols[start][r] == 0) continue;
    if (cols[start][r] < 0)
      for (auto& x : cols[start]) x = -x;
    out.pivot_rows.push_back(r);
    ++start;
  }
  const std::size_t k = out.pivot_rows.size();
  out.basis = Matrix<Integer>(m, k, 0);
  for (std::size_t c = 0; c < k; ++c)
    for (std::size_t i = 0; i < m; ++i) out.basis(i, c) = cols[c][i];
  // reduce entries left of each pivot
  for (std::size_t c = 0; c < k; ++c) {
    const std::size_t r = out.pivot_rows[c];
    for (std::size_t c2 = 0; c2 < c; ++c2) {
      Integer q = detail::floor_div(out.basis(r, c2), out.basis(r, c));
      if (q == 0) continue;
      for (std::size_t i = 0; i < m; ++i) out.basis(i, c2) -= q * out.basis(i, c);
    }
  }
  return out;
}

namespace detail {

/// Row-by-row elimination of span(gens) + E Z^m with entries kept in [0, E).
/// Returns pivot columns; column r has its pivot in row r.
template <class Int>
std::vector<std::vector<Int>> hermite_mod_columns(std::vector<std::vector<Int>> pool, std::size_t m, const Int& e) {
  auto mod = [&](Int x) {
    x %= e;
    if (x < 0) x += e;
    return x;
  };
  std::vector<std::vector<Int>> basis;
  for (std::size_t r = 0; r < m; ++r) {
    std::vector<Int> ee(m, Int(0));
    ee[r] = e;
    pool.push_back(std::move(ee));
    for (;;) {
      std::size_t best = pool.size();
      for (std::size_t j = 0; j < pool.size(); ++j)
        if (pool[j][r] != 0 && (best == pool.size() || pool[j][r] < pool[best][r])) best = j;
      std::swap(pool[0], pool[best]);
      const std::vector<Int>& piv = pool[0];
      bool done = true;
      for (std::size_t j = 1; j < pool.size(); ++j) {
        if (pool[j][r] == 0) continue;
        Int q = pool[j][r] / piv[r];
        pool[j][r] -= q * piv[r];
        for (std::size_t i = r + 1; i < m; ++i)
          if (piv[i] != 0) pool[j][i] = mod(pool[j][i] - mod(q * piv[i]));
        if (pool[j][r] != 0) done = false;
      }
      if (done) break;
    }
    basis.push_back(std::move(pool[0]));
    pool.erase(pool.begin());
    std::vector<std::vector<Int>> kept;
    for (auto& c : pool)
      for (std::size_t i = r + 1; i < m; ++i)
        if (c[i] != 0) {
          kept.push_back(std::move(c));
          break;
        }
    pool = std::move(kept);
  }
  return basis;
}

}  // namespace detail

/// Hermite basis of span(gens) + E Z^m. Every row is processed together with
/// E e_r, so entries below the current row stay in [0, E).
inline HermiteBasis hermite_basis_mod(const Matrix<Integer>& gens, const Integer& e) {
  if (e <= 0) throw Error(ErrorCode::PreconditionFailed, "hermite_basis_mod needs a positive modulus");
  const std::size_t m = gens.rows();
  auto reduce = [&](Integer x) {
    x %= e;
    if (x < 0) x += e;
    return x;
  };
  std::vector<std::vector<Integer>> cols;
  if (e < (Integer(1) << 31)) {
    const long le = e.get_si();
    std::vector<std::vector<long>> pool;
    for (std::size_t j = 0; j < gens.cols(); ++j) {
      std::vector<long> c(m);
      bool nz = false;
      for (std::size_t i = 0; i < m; ++i) {
        c[i] = reduce(gens(i, j)).get_si();
        nz = nz || c[i] != 0;
      }
      if (nz) pool.push_back(std::move(c));
    }
    for (auto& c : detail::hermite_mod_columns<long>(std::move(pool), m, le)) {
      std::vector<Integer> w(m);
      for (std::size_t i = 0; i < m; ++i) w[i] = c[i];
      cols.push_back(std::move(w));
    }
  } else {
    std::vector<std::vector<Integer>> pool;
    for (std::size_t j = 0; j < gens.cols(); ++j) {
      auto c = gens.column(j);
      for (auto& x : c) x = reduce(x);
      if (std::any_of(c.begin(), c.end(), [](const Integer& x) { return x != 0; })) pool.push_back(std::move(c));
    }
    cols = detail::hermite_mod_columns<Integer>(std::move(pool), m, e);
  }
  HermiteBasis out;
  out.basis = Matrix<Integer>(m, m, 0);
  for (std::size_t c = 0; c < m; ++c) {
    out.pivot_rows.push_back(c);
    for (std::size_t i = 0; i < m; ++i) out.basis(i, c) = cols[c][i];
  }
  for (std::size_t c = 0; c < m; ++c)
    for (std::size_t c2 = 0; c2 < c; ++c2) {
      Integer q = detail::floor_div(out.basis(c, c2), out.basis(c, c));
      if (q == 0) continue;
      for (std::size_t i = 0; i < m; ++i) out.basis(i, c2) -= q * out.basis(i, c);
    }
  return out;
}

/// Invariant factors of Z^rows / im(A) other than 1; zeros stand for free summands.
inline std::vector<Integer> cokernel_invariants(const Matrix<Integer>& a) {
  std::vector<Integer> out;
  if (a.cols() == 0) return std::vector<Integer>(a.rows(), 0);
  auto s = smith_normal_form(a, {.left = false, .right = false});
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Integer d = i < std::min(a.rows(), a.cols()) ? s.D(i, i) : Integer(0);
    if (d != 1) out.push_back(d);
  }
  return out;
}

}  // namespace galois
