#pragma once

#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "galois/extension.hpp"
#include "galois/group.hpp"
#include "galois/smith.hpp"
#include "galois/units.hpp"

namespace galois {

/// A finitely generated abelian group Z^f + sum Z/t_j, optionally localized
/// at a set of primes, with a left G-action given by integer matrices on the
/// generators (free generators first).
struct GModule {
  GroupPtr group;
  std::size_t free_rank = 0;
  std::vector<Integer> torsion;
  std::set<Integer> inverted;
  std::vector<Matrix<Integer>> action;  // one per group generator

  std::size_t rank() const { return free_rank + torsion.size(); }

  Matrix<Integer> relations() const {
    Matrix<Integer> r(rank(), torsion.size(), 0);
    for (std::size_t j = 0; j < torsion.size(); ++j) r(free_rank + j, j) = torsion[j];
    return r;
  }

  /// Action matrix of every group element, through its word in the generators.
  std::vector<Matrix<Integer>> element_matrices() const {
    const auto& g = *group;
    std::vector<Matrix<Integer>> out;
    for (std::size_t a = 0; a < g.order(); ++a) {
      Matrix<Integer> m = Matrix<Integer>::identity(rank(), 0, 1);
      for (auto gi : g.word(a)) m = multiply(m, action[gi], Integer(0));
      out.push_back(reduce(m));
    }
    return out;
  }

  /// Torsion rows reduced into [0, t).
  Matrix<Integer> reduce(Matrix<Integer> m) const {
    for (std::size_t j = 0; j < torsion.size(); ++j)
      for (std::size_t c = 0; c < m.cols(); ++c) m(free_rank + j, c) = mod_floor(m(free_rank + j, c), torsion[j]);
    return m;
  }
};

namespace detail {

inline bool lattice_contains(const HermiteBasis& h, const std::vector<Integer>& v) { return h.contains(v); }

/// Coordinates of v in a Hermite basis, if v lies in the lattice.
inline std::optional<std::vector<Integer>> hermite_coords(const HermiteBasis& h, std::vector<Integer> v) {
  std::vector<Integer> c(h.pivot_rows.size(), 0);
  for (std::size_t k = 0; k < h.pivot_rows.size(); ++k) {
    const std::size_t r = h.pivot_rows[k];
    if (v[r] % h.basis(r, k) != 0) return std::nullopt;
    c[k] = v[r] / h.basis(r, k);
    if (c[k] == 0) continue;
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c[k] * h.basis(i, k);
  }
  for (const auto& x : v)
    if (x != 0) return std::nullopt;
  return c;
}

}  // namespace detail

/// Validates the action: every generator matrix preserves the torsion
/// relations and the group relations hold modulo them.
inline void validate(const GModule& m) {
  if (!m.group) throw Error(ErrorCode::ShapeMismatch, "GModule without group");
  if (m.action.size() != m.group->generators().size()) throw Error(ErrorCode::ShapeMismatch, "one action matrix per group generator");
  const std::size_t k = m.rank();
  for (const auto& a : m.action)
    if (a.rows() != k || a.cols() != k) throw Error(ErrorCode::ShapeMismatch, "action matrix size");
  for (const auto& t : m.torsion)
    if (t < 2) throw Error(ErrorCode::ShapeMismatch, "torsion orders must be >= 2");
  Matrix<Integer> rel = m.relations();
  HermiteBasis h = hermite_basis(rel);
  auto in_rel = [&](const Matrix<Integer>& x) {
    for (std::size_t c = 0; c < x.cols(); ++c)
      if (!h.contains(x.column(c))) return false;
    return true;
  };
  for (const auto& a : m.action) {
    // torsion generators must go to elements killed by their order
    for (std::size_t j = 0; j < m.torsion.size(); ++j) {
      auto col = a.column(m.free_rank + j);
      for (auto& x : col) x *= m.torsion[j];
      if (!h.contains(col)) throw Error(ErrorCode::RelationViolated, "action does not preserve torsion relations");
    }
  }
  auto mats = m.element_matrices();
  const auto& g = *m.group;
  for (std::size_t a = 0; a < g.order(); ++a)
    for (std::size_t b = 0; b < g.order(); ++b) {
      Matrix<Integer> d = subtract(multiply(mats[a], mats[b], Integer(0)), mats[g.mul(a, b)]);
      if (!in_rel(d)) throw Error(ErrorCode::RelationViolated, "action matrices violate the group law at " + g.name(a) + ", " + g.name(b));
    }
  Matrix<Integer> id = subtract(mats[0], Matrix<Integer>::identity(k, 0, 1));
  if (!in_rel(id)) throw Error(ErrorCode::RelationViolated, "identity does not act trivially");
}

/// A finitely generated abelian group Z[1/n]^r + torsion.
struct AbelianGroup {
  std::size_t free_rank = 0;
  std::vector<Integer> torsion;
  std::set<Integer> inverted;

  bool is_zero() const { return free_rank == 0 && torsion.empty(); }
  Integer order() const {  // 0 if infinite
    if (free_rank) return 0;
    Integer o = 1;
    for (const auto& t : torsion) o *= t;
    return o;
  }
  bool operator==(const AbelianGroup& o) const { return free_rank == o.free_rank && torsion == o.torsion; }

  std::string describe() const {
    if (is_zero()) return "0";
    std::string z = "Z";
    if (!inverted.empty()) {
      Integer n = 1;
      for (const auto& p : inverted) n *= p;
      z = "Z[1/" + n.get_str() + "]";
    }
    std::string s;
    if (free_rank) s = z + (free_rank > 1 ? "^" + std::to_string(free_rank) : "");
    for (const auto& t : torsion) s += (s.empty() ? "" : " x ") + ("Z/" + t.get_str());
    return s;
  }
};

/// Invariant factors after inverting primes: free parts stay free, torsion
/// loses its inverted part.
inline AbelianGroup localize(const std::vector<Integer>& invariants, const std::set<Integer>& primes) {
  AbelianGroup a;
  a.inverted = primes;
  for (const auto& d : invariants) {
    if (d == 0) {
      ++a.free_rank;
      continue;
    }
    Integer t = abs(strip_primes(d, primes));
    if (t != 1) a.torsion.push_back(t);
  }
  std::sort(a.torsion.begin(), a.torsion.end());
  return a;
}

struct HomologyGroup {
  AbelianGroup group;
  std::vector<Integer> invariants;                 // before localization
  std::vector<std::vector<Integer>> representatives;  // cocycles, one per invariant
};

namespace detail {

/// Coordinates come in blocks of k = free_rank + #torsion; within a block the
/// first free_rank are free. `exponent` is the lcm of the torsion (0 if none)
/// and `annihilator` a positive integer killing the homology (0 if unknown).
struct ComplexShape {
  std::size_t k = 0;
  std::size_t free_rank = 0;
  Integer exponent = 0;
  Integer annihilator = 0;
  bool is_free(std::size_t idx) const { return idx % k < free_rank; }
};

/// Z / (im d_in + rel_mid) for a cycle lattice Z given by a Hermite basis.
inline HomologyGroup homology_from_cycles(const HermiteBasis& z, const Matrix<Integer>& d_in, const Matrix<Integer>& rel_mid,
                                          const std::set<Integer>& inverted, const Integer& annihilator) {
  const std::size_t n = z.basis.rows();
  Matrix<Integer> bgens = hstack(d_in, rel_mid, Integer(0));
  const std::size_t zr = z.pivot_rows.size();
  Matrix<Integer> c(zr, bgens.cols(), 0);
  for (std::size_t j = 0; j < bgens.cols(); ++j) {
    auto x = hermite_coords(z, bgens.column(j));
    if (!x) throw Error(ErrorCode::InternalContradiction, "boundary is not a cycle");
    for (std::size_t i = 0; i < zr; ++i) c(i, j) = (*x)[i];
  }
  HomologyGroup out;
  if (zr == 0) {
    out.group = localize({}, inverted);
    return out;
  }
  if (annihilator > 0) c = hermite_basis_mod(c, annihilator).basis;
  std::vector<Integer> diag(zr, 0);
  Matrix<Integer> uinv = Matrix<Integer>::identity(zr, 0, 1);
  if (c.cols() > 0) {
    auto sf = smith_normal_form(c, {.left = true, .right = false});
    uinv = sf.Uinv;
    for (std::size_t i = 0; i < std::min(zr, c.cols()); ++i) diag[i] = sf.D(i, i);
  }
  for (std::size_t i = 0; i < zr; ++i) {
    Integer d = abs(diag[i]);
    if (d == 1) continue;
    out.invariants.push_back(d);
    std::vector<Integer> rep(n, 0);
    for (std::size_t t = 0; t < zr; ++t)
      if (uinv(t, i) != 0)
        for (std::size_t s = 0; s < n; ++s) rep[s] += z.basis(s, t) * uinv(t, i);
    out.representatives.push_back(std::move(rep));
  }
  out.group = localize(out.invariants, inverted);
  return out;
}

/// Cycles {x : d_out x in rel_out}. Torsion never maps to free coordinates, so
/// the free rows only see the free columns and give an exact integer kernel K;
/// the torsion rows are then solved modulo the exponent in coordinates (y, x_T)
/// with x_F = K y.
inline HermiteBasis cycle_lattice(const Matrix<Integer>& d_out, const Matrix<Integer>& rel_out, const ComplexShape& sh) {
  const std::size_t n = d_out.cols(), q = d_out.rows();
  std::vector<std::size_t> fc, tc, fr, tr;
  for (std::size_t j = 0; j < n; ++j) (sh.is_free(j) ? fc : tc).push_back(j);
  for (std::size_t i = 0; i < q; ++i) (sh.is_free(i) ? fr : tr).push_back(i);
  for (auto i : fr)
    for (auto j : tc)
      if (d_out(i, j) != 0) throw Error(ErrorCode::InternalContradiction, "torsion maps to a free coordinate");
  Matrix<Integer> dff(fr.size(), fc.size(), 0);
  for (std::size_t a = 0; a < fr.size(); ++a)
    for (std::size_t b = 0; b < fc.size(); ++b) dff(a, b) = d_out(fr[a], fc[b]);
  Matrix<Integer> kf = fr.empty() ? Matrix<Integer>::identity(fc.size(), 0, 1) : integer_kernel(dff);
  if (!fc.empty() && kf.cols() > 0) kf = hermite_basis(kf).basis;
  const std::size_t r1 = kf.cols();
  Matrix<Integer> zb;
  if (tc.empty() && tr.empty()) {
    zb = Matrix<Integer>(n, r1, 0);
    for (std::size_t a = 0; a < fc.size(); ++a)
      for (std::size_t c = 0; c < r1; ++c) zb(fc[a], c) = kf(a, c);
    return hermite_basis(zb);
  }
  if (sh.exponent <= 0) throw Error(ErrorCode::InternalContradiction, "torsion coordinates without an exponent");
  // columns (A v ; v) for v = (y, x_T) and (rel_T ; 0)
  const std::size_t nv = r1 + tc.size(), qt = tr.size();
  Matrix<Integer> aug(qt + nv, nv + rel_out.cols(), 0);
  for (std::size_t a = 0; a < qt; ++a) {
    for (std::size_t c = 0; c < r1; ++c) {
      Integer x = 0;
      for (std::size_t b = 0; b < fc.size(); ++b)
        if (kf(b, c) != 0) x += d_out(tr[a], fc[b]) * kf(b, c);
      aug(a, c) = x;
    }
    for (std::size_t b = 0; b < tc.size(); ++b) aug(a, r1 + b) = d_out(tr[a], tc[b]);
    for (std::size_t j = 0; j < rel_out.cols(); ++j) aug(a, nv + j) = rel_out(tr[a], j);
  }
  for (std::size_t v = 0; v < nv; ++v) aug(qt + v, v) = 1;
  HermiteBasis h = hermite_basis_mod(aug, sh.exponent);
  std::vector<std::size_t> keep;
  for (std::size_t c = 0; c < h.pivot_rows.size(); ++c)
    if (h.pivot_rows[c] >= qt) keep.push_back(c);
  zb = Matrix<Integer>(n, keep.size(), 0);
  for (std::size_t c = 0; c < keep.size(); ++c) {
    for (std::size_t a = 0; a < fc.size(); ++a) {
      Integer x = 0;
      for (std::size_t y = 0; y < r1; ++y)
        if (kf(a, y) != 0) x += kf(a, y) * h.basis(qt + y, keep[c]);
      zb(fc[a], c) = x;
    }
    for (std::size_t b = 0; b < tc.size(); ++b) zb(tc[b], c) = h.basis(qt + r1 + b, keep[c]);
  }
  return hermite_basis(zb);
}

/// ker(d_out) / im(d_in) on Z^n / rel_mid, with d_out landing in Z^q / rel_out.
inline HomologyGroup homology(const Matrix<Integer>& d_in, const Matrix<Integer>& d_out, const Matrix<Integer>& rel_mid,
                              const Matrix<Integer>& rel_out, const std::set<Integer>& inverted, const ComplexShape& sh) {
  const std::size_t n = d_out.cols();
  HermiteBasis z = d_out.rows() == 0 ? hermite_basis(Matrix<Integer>::identity(n, 0, 1)) : cycle_lattice(d_out, rel_out, sh);
  return homology_from_cycles(z, d_in, rel_mid, inverted, sh.annihilator);
}

/// |G| kills H^p for p >= 1.
inline ComplexShape complex_shape(const GModule& m, int p) {
  ComplexShape sh;
  sh.k = m.rank();
  sh.free_rank = m.free_rank;
  if (!m.torsion.empty()) {
    sh.exponent = 1;
    for (const auto& t : m.torsion) sh.exponent = lcm(sh.exponent, t);
  }
  if (p >= 1) sh.annihilator = static_cast<long>(m.group->order());
  return sh;
}

inline Matrix<Integer> block_diagonal(const Matrix<Integer>& r, std::size_t copies) {
  Matrix<Integer> out(r.rows() * copies, r.cols() * copies, 0);
  for (std::size_t c = 0; c < copies; ++c)
    for (std::size_t i = 0; i < r.rows(); ++i)
      for (std::size_t j = 0; j < r.cols(); ++j) out(c * r.rows() + i, c * r.cols() + j) = r(i, j);
  return out;
}

}  // namespace detail

struct CohomologyResult {
  std::vector<HomologyGroup> degrees;  // 0..K
  std::string method;

  std::string describe() const {
    std::string s;
    for (std::size_t p = 0; p < degrees.size(); ++p)
      s += "H^" + std::to_string(p) + " = " + degrees[p].group.describe() + "\n";
    return s;
  }
};

/// Normalized bar cochains C^p = maps (G\{e})^p -> M.
inline CohomologyResult cohomology(const GModule& m, int max_degree = 4) {
  validate(m);
  if (max_degree < 0 || max_degree > 6) throw Error(ErrorCode::ResourceBound, "degree bound must be in 0..6");
  const auto& g = *m.group;
  const std::size_t k = m.rank();
  const std::size_t q = g.order() - 1;
  double biggest = k;
  for (int p = 0; p <= max_degree + 1; ++p) biggest = std::max(biggest, std::pow(static_cast<double>(q), p) * k);
  if (biggest > 6000) throw Error(ErrorCode::ResourceBound, "bar complex too large for |G| = " + std::to_string(g.order()) + " and degree " + std::to_string(max_degree));
  auto mats = m.element_matrices();
  std::vector<std::size_t> nonid;
  for (std::size_t a = 1; a < g.order(); ++a) nonid.push_back(a);
  auto tuples = [&](int p) {
    std::vector<std::vector<std::size_t>> out{{}};
    for (int i = 0; i < p; ++i) {
      std::vector<std::vector<std::size_t>> next;
      for (const auto& t : out)
        for (auto a : nonid) {
          auto u = t;
          u.push_back(a);
          next.push_back(std::move(u));
        }
      out = std::move(next);
    }
    return out;
  };
  auto index_of = [&](const std::vector<std::size_t>& t) {
    std::size_t x = 0;
    for (auto a : t) x = x * q + (a - 1);
    return x;
  };
  auto differential = [&](int p) {
    auto rows = tuples(p + 1);
    const std::size_t nc = static_cast<std::size_t>(std::pow(static_cast<double>(q), p) + 0.5);
    Matrix<Integer> d(rows.size() * k, nc * k, 0);
    auto add_block = [&](std::size_t row, const std::vector<std::size_t>& col_tuple, const Matrix<Integer>& blk, long sign) {
      for (auto a : col_tuple)
        if (a == 0) return;
      std::size_t col = index_of(col_tuple);
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
          if (blk(i, j) != 0) d(row * k + i, col * k + j) += sign * blk(i, j);
    };
    const Matrix<Integer> id = Matrix<Integer>::identity(k, 0, 1);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const auto& t = rows[r];
      add_block(r, std::vector<std::size_t>(t.begin() + 1, t.end()), mats[t[0]], 1);
      for (int i = 1; i <= p; ++i) {
        std::vector<std::size_t> u;
        for (int j = 0; j < i - 1; ++j) u.push_back(t[j]);
        u.push_back(g.mul(t[i - 1], t[i]));
        for (int j = i + 1; j <= p; ++j) u.push_back(t[j]);
        add_block(r, u, id, i % 2 ? -1 : 1);
      }
      add_block(r, std::vector<std::size_t>(t.begin(), t.end() - 1), id, (p + 1) % 2 ? -1 : 1);
    }
    return d;
  };
  const Matrix<Integer> rel = m.relations();
  CohomologyResult res;
  res.method = "normalized bar resolution";
  Matrix<Integer> d_prev(k, 0, 0);
  for (int p = 0; p <= max_degree; ++p) {
    const std::size_t cp = static_cast<std::size_t>(std::pow(static_cast<double>(q), p) + 0.5);
    const std::size_t cn = static_cast<std::size_t>(std::pow(static_cast<double>(q), p + 1) + 0.5);
    Matrix<Integer> d = differential(p);
    res.degrees.push_back(detail::homology(d_prev, d, detail::block_diagonal(rel, cp), detail::block_diagonal(rel, cn), m.inverted, detail::complex_shape(m, p)));
    d_prev = d;
  }
  return res;
}

/// Periodic resolution of a cyclic group: H^0 = ker(g-1), then alternating
/// ker N / im(g-1) and ker(g-1) / im N.
inline CohomologyResult cyclic_oracle(const GModule& m, int max_degree = 4) {
  validate(m);
  const auto& g = *m.group;
  if (g.order() > 1 && (g.generators().size() != 1 || g.element_order(g.generators()[0]) != g.order()))
    throw Error(ErrorCode::NotCyclic, g.label() + " is not cyclic on its generator");
  const std::size_t k = m.rank();
  const Matrix<Integer> id = Matrix<Integer>::identity(k, 0, 1);
  Matrix<Integer> gm = g.order() > 1 ? m.action[0] : id;
  Matrix<Integer> t = subtract(gm, id);
  Matrix<Integer> norm(k, k, 0), pw = id;
  for (std::size_t i = 0; i < g.order(); ++i) {
    norm = add(norm, pw);
    pw = multiply(pw, gm, Integer(0));
  }
  const Matrix<Integer> rel = m.relations();
  CohomologyResult res;
  res.method = "periodic resolution";
  res.degrees.push_back(detail::homology(Matrix<Integer>(k, 0, 0), t, rel, rel, m.inverted, detail::complex_shape(m, 0)));
  for (int p = 1; p <= max_degree; ++p) {
    if (p % 2) res.degrees.push_back(detail::homology(t, norm, rel, rel, m.inverted, detail::complex_shape(m, p)));
    else res.degrees.push_back(detail::homology(norm, t, rel, rel, m.inverted, detail::complex_shape(m, p)));
  }
  return res;
}

/// Fixed submodule, as a lattice in Z^k containing the relations.
inline HermiteBasis fixed_lattice(const GModule& m) {
  const std::size_t k = m.rank();
  const Matrix<Integer> rel = m.relations();
  const std::size_t ng = m.action.size();
  Matrix<Integer> sys(ng * k, k + ng * rel.cols(), 0);
  for (std::size_t gi = 0; gi < ng; ++gi) {
    Matrix<Integer> t = subtract(m.action[gi], Matrix<Integer>::identity(k, 0, 1));
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) sys(gi * k + i, j) = t(i, j);
      for (std::size_t j = 0; j < rel.cols(); ++j) sys(gi * k + i, k + gi * rel.cols() + j) = rel(i, j);
    }
  }
  Matrix<Integer> ker = integer_kernel(sys);
  Matrix<Integer> proj(k, ker.cols() + rel.cols(), 0);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < ker.cols(); ++j) proj(i, j) = ker(i, j);
    for (std::size_t j = 0; j < rel.cols(); ++j) proj(i, ker.cols() + j) = rel(i, j);
  }
  return hermite_basis(proj);
}

// ---------------------------------------------------------------------------
// Modules coming from extensions

/// S as an additive G-module over Z or Z[1/n]: the G-stable lattice spanned by
/// the translates of the declared basis, localized at the inverted primes.
inline GModule additive_gmodule(const Extension& ext) {
  auto s = std::dynamic_pointer_cast<const ScalarRing>(ext.base());
  if (!s || (s->scalar_kind() != ScalarKind::Integers && s->scalar_kind() != ScalarKind::Localized))
    throw Error(ErrorCode::UnsupportedBase, "additive G-modules need Z or Z[1/n], not " + ext.base()->key());
  const auto& g = *ext.group();
  const std::size_t d = ext.rank();
  std::vector<Matrix<Rational>> mats;
  for (std::size_t a = 0; a < g.order(); ++a) {
    ElemMatrix m = ext.declared_matrix(a);
    mats.push_back(m.map([](const Element& x) { return x.value().scalar(); }));
  }
  // lattice sum_g M_g Z^d, scaled to integers
  Integer den = 1;
  for (const auto& m : mats)
    for (const auto& x : m.data()) den = lcm(den, x.get_den());
  Matrix<Integer> gens(d, d * g.order(), 0);
  for (std::size_t a = 0; a < g.order(); ++a)
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) gens(i, a * d + j) = Rational(mats[a](i, j) * den).get_num();
  HermiteBasis h = hermite_basis(gens);
  GModule out;
  out.group = ext.group();
  out.free_rank = d;
  out.inverted = s->inverted_primes();
  for (auto gen : g.generators()) {
    Matrix<Integer> act(d, d, 0);
    for (std::size_t c = 0; c < d; ++c) {
      std::vector<Rational> v(d, 0);
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) v[i] += mats[gen](i, j) * Rational(h.basis(j, c));
      std::vector<Integer> vi;
      for (const auto& x : v) {
        if (x.get_den() != 1) throw Error(ErrorCode::InternalContradiction, "lattice is not G-stable");
        vi.push_back(x.get_num());
      }
      auto cc = detail::hermite_coords(h, vi);
      if (!cc) throw Error(ErrorCode::InternalContradiction, "lattice is not G-stable");
      for (std::size_t i = 0; i < d; ++i) act(i, c) = (*cc)[i];
    }
    out.action.push_back(act);
  }
  return out;
}

namespace detail {

/// S^x as a G-module in Smith coordinates of the unit presentation: y = to * e
/// for exponent vectors e, e = from * y, free coordinates first.
struct UnitModule {
  GModule module;
  Matrix<Integer> to;
  Matrix<Integer> from;
};

inline UnitModule unit_module(const Extension& ext, const UnitGroupPresentation& su) {
  if (!same_ring(su.ring, ext.ring())) throw Error(ErrorCode::DescriptorMismatch, "unit presentation is not for " + ext.ring()->key());
  const std::size_t k = su.rank();
  Matrix<Integer> lat = su.relation_lattice();
  Matrix<Integer> u = Matrix<Integer>::identity(k, 0, 1), uinv = u;
  std::vector<Integer> d(k, 0);
  if (lat.cols() > 0) {
    auto sf = smith_normal_form(lat, {.left = true, .right = false});
    u = sf.U;
    uinv = sf.Uinv;
    for (std::size_t i = 0; i < std::min(k, lat.cols()); ++i) d[i] = abs(sf.D(i, i));
  }
  std::vector<std::size_t> keep;  // free first, then torsion
  for (std::size_t i = 0; i < k; ++i)
    if (d[i] == 0) keep.push_back(i);
  UnitModule out;
  for (std::size_t i = 0; i < k; ++i)
    if (d[i] > 1) {
      keep.push_back(i);
      out.module.torsion.push_back(d[i]);
    }
  out.module.group = ext.group();
  out.module.free_rank = keep.size() - out.module.torsion.size();
  out.to = Matrix<Integer>(keep.size(), k, 0);
  out.from = Matrix<Integer>(k, keep.size(), 0);
  for (std::size_t r = 0; r < keep.size(); ++r)
    for (std::size_t c = 0; c < k; ++c) {
      out.to(r, c) = u(keep[r], c);
      out.from(c, r) = uinv(c, keep[r]);
    }
  for (auto gen : ext.group()->generators()) {
    Matrix<Integer> act(keep.size(), keep.size(), 0);
    for (std::size_t c = 0; c < keep.size(); ++c) {
      Element img = ext.apply(gen, su.evaluate(out.from.column(c)));
      auto e = discrete_log(su, img);
      if (!e) throw Error(ErrorCode::MissingUnitPresentation, "image " + img.str() + " is not in the declared unit group");
      auto y = multiply(out.to, Matrix<Integer>::from_columns({*e}, k, 0), Integer(0));
      for (std::size_t r = 0; r < keep.size(); ++r) act(r, c) = y(r, 0);
    }
    out.module.action.push_back(out.module.reduce(act));
  }
  return out;
}

}  // namespace detail

/// S^x as a G-module from a unit presentation of S (relations allowed).
inline GModule unit_gmodule(const Extension& ext, const UnitGroupPresentation& su) { return detail::unit_module(ext, su).module; }

enum class FixedPointStatus { Match, Mismatch };

struct FixedPointResult {
  FixedPointStatus status = FixedPointStatus::Mismatch;
  Integer index = 0;               // [(S^x)^G : image of R^x], 0 if infinite
  std::vector<Element> fixed_generators;
  std::string diagnosis;
};

/// (S^x)^G against the image of the declared R^x.
inline FixedPointResult unit_fixed_points(const Extension& ext, const UnitGroupPresentation& su,
                                          const UnitGroupPresentation& ru) {
  auto um = detail::unit_module(ext, su);
  const GModule& m = um.module;
  HermiteBasis fix = fixed_lattice(m);
  FixedPointResult res;
  for (std::size_t c = 0; c < fix.basis.cols(); ++c) {
    Element u = su.evaluate(multiply(um.from, Matrix<Integer>::from_columns({fix.basis.column(c)}, m.rank(), 0), Integer(0)).column(0));
    if (!u.is_one()) res.fixed_generators.push_back(u);
  }
  Matrix<Integer> rel = m.relations();
  std::vector<std::vector<Integer>> cols;
  for (std::size_t j = 0; j < rel.cols(); ++j) cols.push_back(rel.column(j));
  for (const auto& r : ru.generators) {
    Element u = ext.lift(r);
    auto e = discrete_log(su, u);
    if (!e) throw Error(ErrorCode::MissingUnitPresentation, u.str() + " is not in the declared unit group of S");
    std::vector<Integer> v = multiply(um.to, Matrix<Integer>::from_columns({*e}, su.rank(), 0), Integer(0)).column(0);
    if (!fix.contains(v)) throw Error(ErrorCode::InternalContradiction, r.str() + " is not fixed");
    cols.push_back(v);
  }
  HermiteBasis img = hermite_basis(Matrix<Integer>::from_columns(cols, m.rank(), 0));
  Matrix<Integer> c(fix.pivot_rows.size(), img.basis.cols(), 0);
  for (std::size_t j = 0; j < img.basis.cols(); ++j) {
    auto x = detail::hermite_coords(fix, img.basis.column(j));
    for (std::size_t i = 0; i < c.rows(); ++i) c(i, j) = (*x)[i];
  }
  Integer index = 1;
  for (const auto& d : cokernel_invariants(c)) index = d == 0 ? Integer(0) : Integer(index * d);
  res.index = index;
  res.status = index == 1 ? FixedPointStatus::Match : FixedPointStatus::Mismatch;
  res.diagnosis = index == 1 ? "(S^x)^G = R^x" : "R^x has index " + (index == 0 ? std::string("infinity") : index.get_str()) + " in (S^x)^G";
  return res;
}

struct H1Result {
  AbelianGroup group;
  bool contradiction = false;  // nonzero while Pic(R) is declared trivial
  std::string diagnosis;
};

inline H1Result h1_units(const GModule& units, bool picard_trivial = true) {
  H1Result r;
  r.group = cohomology(units, 1).degrees[1].group;
  r.contradiction = picard_trivial && !r.group.is_zero();
  r.diagnosis = r.contradiction ? "H^1(G, S^x) = " + r.group.describe() + " cannot embed in the trivial Pic(R)" : "H^1(G, S^x) = " + r.group.describe();
  return r;
}

// ---------------------------------------------------------------------------
// Random cyclic modules

/// Block-diagonal actions of a cyclic group: permutation cycles and signs on a
/// free part, conjugated by a random unimodular matrix, and multiplication by
/// units of order dividing n on cyclic torsion summands.
inline GModule random_cyclic_module(std::mt19937_64& rng, std::size_t n, std::size_t max_rank = 3, long max_torsion = 12) {
  GModule m;
  m.group = cyclic_group(n);
  std::uniform_int_distribution<std::size_t> rank_d(1, max_rank);
  const std::size_t rank = rank_d(rng);
  std::uniform_int_distribution<std::size_t> free_d(0, rank);
  m.free_rank = free_d(rng);
  std::uniform_int_distribution<long> tor_d(2, max_torsion);
  for (std::size_t i = m.free_rank; i < rank; ++i) m.torsion.push_back(tor_d(rng));
  Matrix<Integer> a(rank, rank, 0);
  // free part: blocks of length dividing n
  std::size_t i = 0;
  while (i < m.free_rank) {
    std::vector<std::size_t> lens;
    for (std::size_t l = 1; l <= m.free_rank - i; ++l)
      if (n % l == 0) lens.push_back(l);
    std::size_t l = lens[std::uniform_int_distribution<std::size_t>(0, lens.size() - 1)(rng)];
    bool sign = n % 2 == 0 && l == 1 && rng() % 2;
    if (l == 1) a(i, i) = sign ? -1 : 1;
    else
      for (std::size_t j = 0; j < l; ++j) a(i + (j + 1) % l, i + j) = 1;
    i += l;
  }
  if (m.free_rank > 1) {
    // conjugate by an elementary unimodular matrix
    Matrix<Integer> u = Matrix<Integer>::identity(m.free_rank, 0, 1), uinv = u;
    std::uniform_int_distribution<long> c_d(-2, 2);
    std::size_t p = rng() % m.free_rank, q = (p + 1 + rng() % (m.free_rank - 1)) % m.free_rank;
    long c = c_d(rng);
    u(p, q) = c;
    uinv(p, q) = -c;
    Matrix<Integer> blk(m.free_rank, m.free_rank, 0);
    for (std::size_t r = 0; r < m.free_rank; ++r)
      for (std::size_t s = 0; s < m.free_rank; ++s) blk(r, s) = a(r, s);
    blk = multiply(multiply(u, blk, Integer(0)), uinv, Integer(0));
    for (std::size_t r = 0; r < m.free_rank; ++r)
      for (std::size_t s = 0; s < m.free_rank; ++s) a(r, s) = blk(r, s);
  }
  for (std::size_t j = 0; j < m.torsion.size(); ++j) {
    const Integer& t = m.torsion[j];
    std::vector<Integer> units;
    for (Integer c = 1; c < t; ++c) {
      if (gcd(c, t) != 1) continue;
      Integer x = 1;
      for (std::size_t e = 0; e < n; ++e) x = mod_floor(x * c, t);
      if (x == 1) units.push_back(c);
    }
    a(m.free_rank + j, m.free_rank + j) = units[rng() % units.size()];
  }
  m.action.push_back(a);
  return m;
}

}  // namespace galois
