#pragma once

#include <functional>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "galois/galois.hpp"
#include "galois/modules.hpp"

namespace galois {

// ---------------------------------------------------------------------------
// Bases of projective images

/// An R-basis of the column span of a matrix, found by elimination with unit
/// pivots, together with the pivot minor used to read off coordinates.
struct ImageBasis {
  ElemMatrix basis;               // d x k
  std::vector<std::size_t> rows;  // pivot rows
  ElemMatrix minor_inverse;       // inverse of basis restricted to rows

  std::size_t rank() const { return basis.cols(); }

  std::optional<ElemVector> coords(const ElemVector& v, const RingPtr& r) const {
    ElemVector sub;
    for (auto i : rows) sub.push_back(v[i]);
    ElemVector c = mat_vec(minor_inverse, sub, r);
    if (mat_vec(basis, c, r) != v) return std::nullopt;
    return c;
  }
};

inline std::optional<ImageBasis> image_basis(const ElemMatrix& gens, const RingPtr& r) {
  const std::size_t d = gens.rows();
  ElemMatrix w = gens;
  std::vector<std::size_t> cols, rows;
  std::vector<bool> used_col(gens.cols(), false);
  for (;;) {
    std::optional<std::pair<std::size_t, std::size_t>> piv;
    std::optional<Element> inv;
    for (std::size_t j = 0; j < w.cols() && !piv; ++j) {
      if (used_col[j]) continue;
      for (std::size_t i = 0; i < d; ++i) {
        if (w(i, j).is_zero()) continue;
        auto u = is_unit(w(i, j));
        if (u.is_unit()) {
          piv = {i, j};
          inv = u.inverse;
          break;
        }
      }
    }
    if (!piv) break;
    auto [pi, pj] = *piv;
    used_col[pj] = true;
    cols.push_back(pj);
    rows.push_back(pi);
    for (std::size_t j = 0; j < w.cols(); ++j) {
      if (j == pj || w(pi, j).is_zero()) continue;
      Element f = w(pi, j) * *inv;
      for (std::size_t i = 0; i < d; ++i) w(i, j) = w(i, j) - f * w(i, pj);
    }
  }
  for (std::size_t j = 0; j < w.cols(); ++j)
    if (!used_col[j])
      for (std::size_t i = 0; i < d; ++i)
        if (!w(i, j).is_zero()) return std::nullopt;
  ImageBasis out;
  out.basis = zero_matrix(r, d, cols.size());
  for (std::size_t k = 0; k < cols.size(); ++k)
    for (std::size_t i = 0; i < d; ++i) out.basis(i, k) = gens(i, cols[k]);
  out.rows = rows;
  ElemMatrix minor = zero_matrix(r, rows.size(), rows.size());
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t k = 0; k < cols.size(); ++k) minor(a, k) = out.basis(rows[a], k);
  auto mi = inverse(minor, r);
  if (!mi) return std::nullopt;
  out.minor_inverse = *mi;
  return out;
}

// ---------------------------------------------------------------------------
// Kummer models

struct KummerExtension {
  Extension ext;
  long n = 1;
  Element u;
  Element zeta;
};

/// The ring R[x_1]/(x_1^n_1 - u_1)...[x_k]/(x_k^n_k - u_k) with the product
/// of the cyclic groups acting by x_i -> zeta_i x_i.
inline Extension kummer_tower(const RingPtr& r, const std::vector<long>& ns, const std::vector<Element>& us,
                              const std::vector<Element>& zetas, const std::vector<std::string>& vars = {}) {
  if (ns.empty() || ns.size() != us.size() || ns.size() != zetas.size()) throw Error(ErrorCode::ShapeMismatch, "kummer_tower");
  RingPtr s = r;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const long n = ns[i];
    if (n < 1) throw Error(ErrorCode::PreconditionFailed, "n must be positive");
    if (!is_unit(Element::integer(r, n)).is_unit()) throw Error(ErrorCode::PreconditionFailed, "1/" + std::to_string(n) + " is not in " + r->key());
    if (!same_ring(us[i].ring(), r) || !is_unit(us[i]).is_unit()) throw Error(ErrorCode::NotAUnit, us[i].str() + " is not a unit of " + r->key());
    if (!same_ring(zetas[i].ring(), r) || root_order(zetas[i], n) != n)
      throw Error(ErrorCode::RootOfUnityMissing, zetas[i].str() + " is not a primitive " + std::to_string(n) + "-th root of unity");
    std::optional<long> vdeg;
    if (r->graded()) {
      auto d = homogeneous_degree(us[i]);
      if (!d || *d % (2 * n) != 0)
        throw Error(ErrorCode::DegreeNotDivisible, "degree of " + us[i].str() + " is not divisible by " + std::to_string(2 * n));
      vdeg = *d / n;
    }
    std::string v = i < vars.size() ? vars[i] : (ns.size() == 1 ? "x" : "x" + std::to_string(i + 1));
    std::vector<std::string> taken = s->variables();
    v = detail::fresh_name(v, taken);
    names.push_back(v);
    std::vector<Value> f(static_cast<std::size_t>(n) + 1, s->zero());
    f[0] = coerce(-us[i], s).value();
    f[n] = s->one();
    s = monic_quotient(s, v, f, vdeg);
  }
  std::vector<GroupPtr> factors;
  for (long n : ns) factors.push_back(cyclic_group(static_cast<std::size_t>(n)));
  GroupPtr g = factors.size() == 1 ? factors[0] : product_group(factors);
  std::vector<GeneratorImages> images;
  std::size_t gi = 0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (ns[i] == 1) continue;
    auto x = *detail::named_element(s, names[i]);
    images.push_back({{names[i], coerce(zetas[i], s) * x}});
    ++gi;
  }
  return Extension(r, s, g, images, {});
}

inline KummerExtension build_kummer(const RingPtr& r, long n, const Element& u, const Element& zeta) {
  return {kummer_tower(r, {n}, {u}, {zeta}), n, u, zeta};
}

/// An element of exact order n among the torsion of a unit presentation.
inline std::optional<Element> find_root_of_unity(const UnitGroupPresentation& p, long n) {
  if (n == 1) return Element::one(p.ring);
  std::vector<std::size_t> tors;
  for (std::size_t i = 0; i < p.rank(); ++i)
    if (p.orders[i] != 0) tors.push_back(i);
  std::vector<long> a(tors.size(), 0);
  double size = 1;
  for (auto i : tors) size *= p.orders[i].get_d();
  if (size > 1e5) throw Error(ErrorCode::ResourceBound, "torsion search");
  for (;;) {
    std::vector<Integer> e(p.rank(), 0);
    for (std::size_t k = 0; k < tors.size(); ++k) e[tors[k]] = a[k];
    Element z = p.evaluate(e);
    if (root_order(z, n) == n) return z;
    std::size_t k = 0;
    while (k < tors.size() && ++a[k] == p.orders[tors[k]].get_si()) a[k++] = 0;
    if (k == tors.size()) break;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Kummer groups R^x / (R^x)^n and the graded variant

namespace detail {

/// Basis of {a in Z^k : sum deg_i a_i = 0 mod m}.
inline HermiteBasis degree_lattice(const std::vector<long>& degs, long m) {
  const std::size_t k = degs.size();
  Matrix<Integer> row(1, k + 1, 0);
  for (std::size_t i = 0; i < k; ++i) row(0, i) = degs[i];
  row(0, k) = m;
  Matrix<Integer> ker = integer_kernel(row);
  Matrix<Integer> proj(k, ker.cols(), 0);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < ker.cols(); ++j) proj(i, j) = ker(i, j);
  return hermite_basis(proj);
}

}  // namespace detail

struct KummerGroup;

struct KummerClass {
  std::shared_ptr<const KummerGroup> group;
  std::vector<Integer> exponents;  // canonical
  Element representative;

  bool operator==(const KummerClass& o) const { return exponents == o.exponents; }
  bool is_trivial() const {
    for (const auto& e : exponents)
      if (e != 0) return false;
    return true;
  }
  std::string str() const { return "[" + representative.str() + "]"; }
};

struct KummerGroup {
  RingPtr ring;
  long n = 1;
  UnitGroupPresentation units;
  bool graded = false;
  HermiteBasis admissible;  // exponents of units usable for R(n;u)
  HermiteBasis powers;      // n-th powers and relations
  std::vector<Integer> orders;
  std::vector<std::vector<Integer>> generator_exponents;

  std::vector<Integer> canonical(const std::vector<Integer>& e) const { return powers.reduce(e); }

  Integer order() const {
    Integer o = 1;
    for (const auto& x : orders) o *= x;
    return o;
  }

  std::string describe() const {
    std::vector<long> ds;
    for (const auto& o : orders) ds.push_back(o.get_si());
    return describe_invariants(ds);
  }
};

using KummerGroupPtr = std::shared_ptr<const KummerGroup>;

inline KummerClass make_class(const KummerGroupPtr& g, const std::vector<Integer>& exps) {
  KummerClass c;
  c.group = g;
  c.exponents = g->canonical(exps);
  c.representative = g->units.evaluate(c.exponents);
  return c;
}

namespace detail {

inline KummerGroupPtr kummer_lattices(const RingPtr& r, long n, const UnitGroupPresentation& units, bool graded) {
  if (n < 1) throw Error(ErrorCode::PreconditionFailed, "n must be positive");
  if (!same_ring(units.ring, r)) throw Error(ErrorCode::DescriptorMismatch, "unit presentation is for " + units.ring->key());
  auto g = std::make_shared<KummerGroup>();
  g->ring = r;
  g->n = n;
  g->units = units;
  g->graded = graded;
  const std::size_t k = units.rank();
  std::vector<long> degs(k, 0);
  if (graded) {
    degs = units.degrees;
    bool two_zero = Element::integer(r, 2).is_zero();
    for (auto d : degs)
      if (d % 2 != 0 && !two_zero) throw Error(ErrorCode::OddDegreeUnit, "unit of odd degree " + std::to_string(d));
  }
  HermiteBasis lam2n = degree_lattice(degs, 2 * n);
  HermiteBasis lam2 = degree_lattice(degs, 2);
  g->admissible = lam2n;
  Matrix<Integer> rel = units.relation_lattice();
  Matrix<Integer> gens(k, lam2.basis.cols() + rel.cols(), 0);
  for (std::size_t j = 0; j < lam2.basis.cols(); ++j)
    for (std::size_t i = 0; i < k; ++i) gens(i, j) = lam2.basis(i, j) * n;
  for (std::size_t j = 0; j < rel.cols(); ++j)
    for (std::size_t i = 0; i < k; ++i) gens(i, lam2.basis.cols() + j) = rel(i, j);
  g->powers = hermite_basis(gens);
  // quotient admissible / powers in coordinates of the admissible basis
  const Matrix<Integer>& b = lam2n.basis;
  const std::size_t rk = b.cols();
  Matrix<Integer> c(rk, g->powers.basis.cols(), 0);
  for (std::size_t j = 0; j < g->powers.basis.cols(); ++j) {
    auto x = integer_solve(b, g->powers.basis.column(j));
    if (!x) throw Error(ErrorCode::InternalContradiction, "n-th powers outside the admissible lattice");
    for (std::size_t i = 0; i < rk; ++i) c(i, j) = (*x)[i];
  }
  auto in_powers = [&](const std::vector<Integer>& v) { return g->powers.contains(v); };
  auto times = [](std::vector<Integer> v, const Integer& t) {
    for (auto& x : v) x *= t;
    return v;
  };
  auto element_order = [&](const std::vector<Integer>& v) -> Integer {
    for (long t = 1; t <= n; ++t)
      if (in_powers(times(v, t))) return t;
    throw Error(ErrorCode::InternalContradiction, "class order exceeds n");
  };
  Integer total = 1;
  for (const auto& d : cokernel_invariants(c)) {
    if (d == 0) throw Error(ErrorCode::InternalContradiction, "Kummer group is infinite");
    total *= d;
  }
  // prefer the admissible basis vectors themselves when they are independent
  std::vector<std::vector<Integer>> nice;
  std::vector<Integer> nice_orders;
  Integer prod = 1;
  for (std::size_t j = 0; j < rk; ++j) {
    auto v = b.column(j);
    if (in_powers(v)) continue;
    nice.push_back(v);
    nice_orders.push_back(element_order(v));
    prod *= nice_orders.back();
  }
  bool use_nice = prod == total;
  if (use_nice && total <= 4096) {
    std::set<std::vector<Integer>> seen;
    std::vector<long> a(nice.size(), 0);
    for (;;) {
      std::vector<Integer> v(k, 0);
      for (std::size_t i = 0; i < nice.size(); ++i)
        for (std::size_t t = 0; t < k; ++t) v[t] += nice[i][t] * a[i];
      seen.insert(g->powers.reduce(v));
      std::size_t i = 0;
      while (i < a.size() && ++a[i] == nice_orders[i].get_si()) a[i++] = 0;
      if (i == a.size()) break;
    }
    use_nice = Integer(seen.size()) == total;
  } else {
    use_nice = false;
  }
  if (use_nice) {
    g->generator_exponents = nice;
    g->orders = nice_orders;
  } else {
    auto sf = smith_normal_form(c);
    for (std::size_t i = 0; i < rk; ++i) {
      Integer d = i < std::min(c.rows(), c.cols()) ? sf.D(i, i) : Integer(0);
      if (d == 1) continue;
      std::vector<Integer> v(k, 0);
      for (std::size_t t = 0; t < rk; ++t)
        for (std::size_t s = 0; s < k; ++s) v[s] += b(s, t) * sf.Uinv(t, i);
      g->generator_exponents.push_back(g->powers.reduce(v));
      g->orders.push_back(abs(d));
    }
  }
  return g;
}

}  // namespace detail

inline KummerGroupPtr kummer_group(const RingPtr& r, long n, const std::optional<UnitGroupPresentation>& units) {
  if (!units) throw Error(ErrorCode::MissingUnitPresentation, "no unit presentation for " + r->key());
  return detail::kummer_lattices(r, n, *units, false);
}

inline KummerGroupPtr graded_kummer_group(const RingPtr& r, long n, const std::optional<UnitGroupPresentation>& units) {
  if (!units) throw Error(ErrorCode::MissingUnitPresentation, "no unit presentation for " + r->key());
  return detail::kummer_lattices(r, n, *units, true);
}

inline std::vector<KummerClass> generator_classes(const KummerGroupPtr& g) {
  std::vector<KummerClass> out;
  for (const auto& e : g->generator_exponents) out.push_back(make_class(g, e));
  return out;
}

/// Every class, as sum a_i gen_i with 0 <= a_i < order_i, in mixed-radix order.
inline std::vector<KummerClass> all_classes(const KummerGroupPtr& g) {
  std::vector<KummerClass> out;
  const std::size_t m = g->orders.size();
  const std::size_t k = g->units.rank();
  std::vector<long> a(m, 0);
  for (;;) {
    std::vector<Integer> v(k, 0);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t t = 0; t < k; ++t) v[t] += g->generator_exponents[i][t] * a[i];
    out.push_back(make_class(g, v));
    std::size_t i = 0;
    while (i < m && ++a[i] == g->orders[i].get_si()) a[i++] = 0;
    if (i == m) break;
  }
  return out;
}

inline KummerClass kummer_class(const KummerGroupPtr& g, const Element& u) {
  if (!same_ring(u.ring(), g->ring)) throw Error(ErrorCode::DescriptorMismatch, "kummer_class");
  if (!is_unit(u).is_unit()) throw Error(ErrorCode::NotAUnit, u.str() + " is not a unit");
  auto e = discrete_log(g->units, u);
  if (!e) throw Error(ErrorCode::NotAUnit, u.str() + " is not in the declared unit group");
  if (!g->admissible.contains(*e))
    throw Error(ErrorCode::DegreeNotDivisible, "degree of " + u.str() + " is not divisible by " + std::to_string(2 * g->n));
  return make_class(g, *e);
}

inline KummerClass class_product(const KummerClass& a, const KummerClass& b) {
  if (a.group != b.group) throw Error(ErrorCode::DescriptorMismatch, "classes of different Kummer groups");
  std::vector<Integer> e(a.exponents.size());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = a.exponents[i] + b.exponents[i];
  return make_class(a.group, e);
}

inline KummerClass class_power(const KummerClass& a, long k) {
  std::vector<Integer> e(a.exponents);
  for (auto& x : e) x *= k;
  return make_class(a.group, e);
}

/// Human-readable model of R(2;u): i for a factor -1, a square root for the rest.
inline std::string kummer_model_label(const KummerClass& c) {
  if (c.is_trivial()) return "1";
  const auto& g = *c.group;
  if (g.n != 2) return "(" + c.representative.str() + ")^(1/" + std::to_string(g.n) + ")";
  Element minus = Element::integer(g.ring, -1);
  Element rest = c.representative;
  std::string out;
  for (std::size_t i = 0; i < g.units.rank(); ++i)
    if (g.units.generators[i] == minus && c.exponents[i] % 2 != 0) {
      out = "i";
      rest = -rest;
    }
  if (!rest.is_one()) {
    std::string s = rest.str();
    bool atomic = s.find_first_of("*+- /") == std::string::npos;
    out += "√" + (atomic ? s : "(" + s + ")");
  }
  return out;
}

inline KummerExtension build_kummer(const KummerClass& c) {
  auto z = find_root_of_unity(c.group->units, c.group->n);
  if (!z) throw Error(ErrorCode::RootOfUnityMissing, "no primitive " + std::to_string(c.group->n) + "-th root of unity");
  return build_kummer(c.group->ring, c.group->n, c.representative, *z);
}

// ---------------------------------------------------------------------------
// Eigenspaces and characters

struct EigenPiece {
  std::string label;
  std::vector<long> exponents;  // eigenvalue exponents per group generator, or character exponents
  ElemMatrix projector;         // declared coordinates
  std::optional<ImageBasis> basis;
};

struct EigenspaceDecomposition {
  std::shared_ptr<const Extension> ext;
  Element zeta;
  bool characters = false;
  std::vector<EigenPiece> pieces;
  Check reassembly = Check::Undecided;
  std::optional<Element> reassembly_det;

  FGModule module(std::size_t i) const { return FGModule::idempotent_image(ext->base(), pieces[i].projector); }
  std::vector<Element> elements(std::size_t i) const {
    std::vector<Element> out;
    if (!pieces[i].basis) return out;
    for (std::size_t j = 0; j < pieces[i].basis->rank(); ++j) out.push_back(ext->from_declared(pieces[i].basis->basis.column(j)));
    return out;
  }
};

namespace detail {

/// (1/n) sum_k lambda^-k M^k for a generator matrix M of order n.
inline ElemMatrix eigen_projector(const ElemMatrix& m, long n, const Element& lambda, const RingPtr& r) {
  auto ninv = is_unit(Element::integer(r, n));
  if (!ninv.is_unit()) throw Error(ErrorCode::PreconditionFailed, "1/" + std::to_string(n) + " is not in " + r->key());
  auto linv = is_unit(lambda);
  if (!linv.is_unit()) throw Error(ErrorCode::PreconditionFailed, "eigenvalue is not a unit");
  const std::size_t d = m.rows();
  ElemMatrix p = zero_matrix(r, d, d);
  ElemMatrix mk = identity_matrix(r, d);
  Element c = Element::one(r);
  for (long k = 0; k < n; ++k) {
    p = add(p, scale(mk, c));
    mk = mat_mul(mk, m, r);
    c = c * *linv.inverse;
  }
  return scale(p, *ninv.inverse);
}

inline void finish_decomposition(EigenspaceDecomposition& dec) {
  const RingPtr& r = dec.ext->base();
  const std::size_t d = dec.ext->rank();
  ElemMatrix all = zero_matrix(r, d, 0);
  bool complete = true;
  for (auto& p : dec.pieces) {
    p.basis = image_basis(p.projector, r);
    if (!p.basis) {
      complete = false;
      continue;
    }
    all = hstack(all, p.basis->basis, Element::zero(r));
  }
  if (!complete || all.cols() != d) {
    dec.reassembly = complete ? Check::Fail : Check::Undecided;
    return;
  }
  Element det_all = det(all, r);
  dec.reassembly_det = det_all;
  auto u = is_unit(det_all);
  dec.reassembly = u.status == UnitStatus::Unit ? Check::Pass : u.status == UnitStatus::NonUnit ? Check::Fail : Check::Undecided;
}

}  // namespace detail

/// S^(k) = {s : gamma s = zeta^k s} for a cyclic extension, as images of the
/// spectral projectors.
inline EigenspaceDecomposition eigenspaces(const Extension& ext, const Element& zeta) {
  const auto& g = *ext.group();
  if (g.generators().size() != 1 && g.order() != 1) throw Error(ErrorCode::NotCyclic, g.label() + " is not presented as cyclic");
  const long n = static_cast<long>(g.order());
  const RingPtr& r = ext.base();
  Element z = coerce(zeta, r);
  if (root_order(z, n) != n) throw Error(ErrorCode::PreconditionFailed, z.str() + " is not a primitive " + std::to_string(n) + "-th root of unity");
  EigenspaceDecomposition dec;
  dec.ext = std::make_shared<const Extension>(ext);
  dec.zeta = z;
  ElemMatrix m = n > 1 ? ext.declared_matrix(g.generators()[0]) : identity_matrix(r, ext.rank());
  for (long k = 0; k < n; ++k) {
    EigenPiece p;
    p.label = "S^(" + std::to_string(k) + ")";
    p.exponents = {k};
    p.projector = detail::eigen_projector(m, n, z.pow(k), r);
    dec.pieces.push_back(std::move(p));
  }
  detail::finish_decomposition(dec);
  return dec;
}

/// S = sum_chi e_chi S for an abelian group with |G| invertible.
inline EigenspaceDecomposition character_decomposition(const Extension& ext, const Element& zeta) {
  const auto& g = *ext.group();
  if (!g.is_abelian()) throw Error(ErrorCode::PreconditionFailed, g.label() + " is not abelian");
  const RingPtr& r = ext.base();
  Element z = coerce(zeta, r);
  EigenspaceDecomposition dec;
  dec.ext = std::make_shared<const Extension>(ext);
  dec.zeta = z;
  dec.characters = true;
  auto chars = all_characters(ext.group(), z);
  for (std::size_t c = 0; c < chars.size(); ++c) {
    auto e = character_idempotent(chars[c], r);
    EigenPiece p;
    p.label = "S(chi" + std::to_string(c) + ")";
    p.exponents = chars[c].exponents;
    p.projector = zero_matrix(r, ext.rank(), ext.rank());
    for (std::size_t a = 0; a < g.order(); ++a)
      if (!e.coeffs[a].is_zero()) p.projector = add(p.projector, scale(ext.declared_matrix(a), e.coeffs[a]));
    dec.pieces.push_back(std::move(p));
  }
  detail::finish_decomposition(dec);
  return dec;
}

/// Multiplication S_a (x) S_b -> S_ab is an isomorphism for every pair of pieces.
inline Check check_eigenspace_pairings(const EigenspaceDecomposition& dec) {
  const RingPtr& r = dec.ext->base();
  const auto& g = *dec.ext->group();
  const long e = g.exponent();
  auto target = [&](std::size_t a, std::size_t b) -> std::optional<std::size_t> {
    std::vector<long> x(dec.pieces[a].exponents.size());
    const long mod = dec.characters ? e : static_cast<long>(g.order());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = (dec.pieces[a].exponents[i] + dec.pieces[b].exponents[i]) % mod;
    for (std::size_t c = 0; c < dec.pieces.size(); ++c)
      if (dec.pieces[c].exponents == x) return c;
    return std::nullopt;
  };
  Check result = Check::Pass;
  for (std::size_t a = 0; a < dec.pieces.size(); ++a)
    for (std::size_t b = a; b < dec.pieces.size(); ++b) {
      auto c = target(a, b);
      if (!c || !dec.pieces[a].basis || !dec.pieces[b].basis || !dec.pieces[*c].basis) {
        result = Check::Undecided;
        continue;
      }
      auto ea = dec.elements(a), eb = dec.elements(b);
      const auto& tb = *dec.pieces[*c].basis;
      if (ea.size() * eb.size() != tb.rank()) return Check::Fail;
      ElemMatrix m = zero_matrix(r, tb.rank(), tb.rank());
      std::size_t col = 0;
      for (const auto& x : ea)
        for (const auto& y : eb) {
          auto cc = tb.coords(dec.ext->declared_coords(x * y), r);
          if (!cc) return Check::Fail;
          for (std::size_t i = 0; i < cc->size(); ++i) m(i, col) = (*cc)[i];
          ++col;
        }
      auto u = is_unit(det(m, r));
      if (u.status == UnitStatus::NonUnit) return Check::Fail;
      if (u.status == UnitStatus::Undecided) result = Check::Undecided;
    }
  return result;
}

// ---------------------------------------------------------------------------
// Classification and comparison with Kummer models

/// Joint eigenspace of the group generators with the given eigenvalues.
inline std::optional<ImageBasis> joint_eigenspace(const Extension& ext, const std::vector<Element>& lambdas) {
  const auto& g = *ext.group();
  const RingPtr& r = ext.base();
  if (lambdas.size() != g.generators().size()) throw Error(ErrorCode::ShapeMismatch, "one eigenvalue per generator");
  ElemMatrix p = identity_matrix(r, ext.rank());
  for (std::size_t j = 0; j < lambdas.size(); ++j) {
    std::size_t gen = g.generators()[j];
    p = mat_mul(p, detail::eigen_projector(ext.declared_matrix(gen), g.element_order(gen), lambdas[j], r), r);
  }
  return image_basis(p, r);
}

/// Class of a cyclic C_n extension: s^n for a generator s of S^(1).
inline KummerClass classify_cyclic(const Extension& ext, const KummerGroupPtr& kg) {
  const long n = kg->n;
  if (static_cast<long>(ext.group()->order()) != n) throw Error(ErrorCode::ShapeMismatch, "group order differs from n");
  auto z = find_root_of_unity(kg->units, n);
  if (!z) throw Error(ErrorCode::RootOfUnityMissing, "no root of unity");
  std::vector<Element> lambdas;
  if (n > 1) lambdas.push_back(*z);
  auto piece = joint_eigenspace(ext, lambdas);
  if (!piece || piece->rank() != 1) throw Error(ErrorCode::PreconditionFailed, "S^(1) is not free of rank 1");
  Element s = ext.from_declared(piece->basis.column(0));
  auto v = ext.to_base(s.pow(n));
  if (!v) throw Error(ErrorCode::InternalContradiction, "s^n not in R");
  return kummer_class(kg, *v);
}

/// Compares an extension with the Kummer tower of the same group: each x_i is
/// sent to a rescaled eigenvector s_i with (s_i / w_i)^n_i = u_i.
inline MorphismResult kummer_model_map(const Extension& model, const Extension& ext, const UnitGroupPresentation& units,
                                       const std::vector<long>& ns, const std::vector<Element>& us,
                                       const std::vector<Element>& zetas) {
  const RingPtr& r = ext.base();
  const auto& g = *ext.group();
  if (g.label() != model.group()->label()) throw Error(ErrorCode::DescriptorMismatch, "groups differ");
  GeneratorImages images;
  auto names = model.generator_names();
  std::size_t gi = 0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (ns[i] == 1) continue;
    std::vector<Element> lambdas;
    for (std::size_t j = 0; j < g.generators().size(); ++j) lambdas.push_back(j == gi ? zetas[i] : Element::one(r));
    ++gi;
    auto piece = joint_eigenspace(ext, lambdas);
    MorphismResult fail;
    if (!piece || piece->rank() != 1) {
      fail.diagnosis = "eigenspace for factor " + std::to_string(i + 1) + " is not free of rank 1";
      return fail;
    }
    Element s = ext.from_declared(piece->basis.column(0));
    auto v = ext.to_base(s.pow(ns[i]));
    if (!v) throw Error(ErrorCode::InternalContradiction, "s^n not in R");
    auto inv_u = is_unit(us[i]);
    auto e = discrete_log(units, *v * *inv_u.inverse);
    if (!e) {
      fail.diagnosis = v->str() + " is not in the declared unit group";
      return fail;
    }
    // w with w^n = v / u: solve n a + L c = e
    Matrix<Integer> rel = units.relation_lattice();
    const std::size_t k = units.rank();
    Matrix<Integer> sys(k, k + rel.cols(), 0);
    for (std::size_t t = 0; t < k; ++t) sys(t, t) = ns[i];
    for (std::size_t j = 0; j < rel.cols(); ++j)
      for (std::size_t t = 0; t < k; ++t) sys(t, k + j) = rel(t, j);
    auto sol = integer_solve(sys, *e);
    if (!sol) {
      fail.diagnosis = "classes differ in factor " + std::to_string(i + 1) + ": " + v->str() + " vs " + us[i].str();
      return fail;
    }
    std::vector<Integer> a(sol->begin(), sol->begin() + static_cast<long>(k));
    Element w = units.evaluate(a);
    images[names[i]] = s * ext.lift(*is_unit(w).inverse);
  }
  return check_morphism_iso(model, ext, algebra_map_matrix(model, ext, images));
}

// ---------------------------------------------------------------------------
// Harrison products

/// A primitive n-th root of unity of r from its standard unit presentation.
inline std::optional<Element> root_of_unity_in(const RingPtr& r, long n) {
  auto u = standard_units(r);
  if (!u) return std::nullopt;
  return find_root_of_unity(*u, n);
}

/// (S1 (x) S2)^K with K = {(g, g^-1)} and G acting through (g, 1). When G is
/// the product of its cyclic generators and R has the roots of unity, the
/// result is the Kummer tower on joint eigenvectors; otherwise R[t]/(f) for a
/// primitive element t.
inline Extension harrison_product(const Extension& s1, const Extension& s2, const UnitGroupPresentation* units = nullptr) {
  const RingPtr& r = s1.base();
  if (!same_ring(r, s2.base())) throw Error(ErrorCode::DescriptorMismatch, "different base rings");
  if (s1.group()->label() != s2.group()->label() || s1.group()->order() != s2.group()->order())
    throw Error(ErrorCode::DescriptorMismatch, "different groups");
  const auto& g = *s1.group();
  if (!g.is_abelian()) throw Error(ErrorCode::PreconditionFailed, "Harrison product needs an abelian group");
  auto ninv = is_unit(Element::integer(r, static_cast<long>(g.order())));
  if (!ninv.is_unit()) throw Error(ErrorCode::UnsupportedBase, "|G| is not invertible in " + r->key());
  const std::size_t d1 = s1.rank(), d2 = s2.rank(), d = d1 * d2;
  const std::size_t n = g.order();
  auto table = [&](const Extension& e) {
    std::vector<std::vector<ElemVector>> t(e.rank(), std::vector<ElemVector>(e.rank()));
    for (std::size_t i = 0; i < e.rank(); ++i)
      for (std::size_t k = 0; k < e.rank(); ++k) t[i][k] = e.declared_coords(e.basis()[i] * e.basis()[k]);
    return t;
  };
  auto t1 = table(s1), t2 = table(s2);
  auto mult = [&](const ElemVector& u, const ElemVector& v) {
    ElemVector out(d, Element::zero(r));
    for (std::size_t a = 0; a < d; ++a) {
      if (u[a].is_zero()) continue;
      for (std::size_t b = 0; b < d; ++b) {
        if (v[b].is_zero()) continue;
        Element c = u[a] * v[b];
        const auto& x = t1[a / d2][b / d2];
        const auto& y = t2[a % d2][b % d2];
        for (std::size_t p = 0; p < d1; ++p) {
          if (x[p].is_zero()) continue;
          Element cx = c * x[p];
          for (std::size_t q = 0; q < d2; ++q)
            if (!y[q].is_zero()) out[p * d2 + q] = out[p * d2 + q] + cx * y[q];
        }
      }
    }
    return out;
  };
  ElemMatrix pk = zero_matrix(r, d, d);
  for (std::size_t a = 0; a < n; ++a) pk = add(pk, kron(s1.declared_matrix(a), s2.declared_matrix(g.inv(a)), r));
  pk = scale(pk, *ninv.inverse);
  auto fix = image_basis(pk, r);
  if (!fix || fix->rank() != n) throw Error(ErrorCode::UnsupportedBase, "fixed ring is not free of rank |G| with a unit-pivot basis");
  // degrees of the tensor basis, for graded inputs
  std::vector<std::optional<long>> deg(d);
  const bool graded = r->graded() || s1.ring()->graded() || s2.ring()->graded();
  if (graded)
    for (std::size_t i = 0; i < d1; ++i)
      for (std::size_t j = 0; j < d2; ++j) {
        auto a = homogeneous_degree(s1.basis()[i]);
        auto b = homogeneous_degree(s2.basis()[j]);
        if (a && b) deg[i * d2 + j] = *a + *b;
      }
  auto homogeneous = [&](const ElemVector& v) -> std::optional<long> {
    std::optional<long> out;
    for (std::size_t a = 0; a < d; ++a) {
      if (v[a].is_zero()) continue;
      if (!deg[a] || (out && *out != *deg[a])) return std::nullopt;
      out = deg[a];
    }
    return out.value_or(0);
  };
  ElemVector one(d, Element::zero(r));
  one[0] = Element::one(r);
  // eigenvector tower
  {
    std::vector<long> ns;
    std::size_t prod = 1;
    for (auto gen : g.generators()) {
      ns.push_back(static_cast<long>(g.element_order(gen)));
      prod *= g.element_order(gen);
    }
    std::vector<Element> zetas;
    bool have_roots = prod == n && !ns.empty();
    for (std::size_t i = 0; i < ns.size() && have_roots; ++i) {
      auto z = units ? find_root_of_unity(*units, ns[i]) : root_of_unity_in(r, ns[i]);
      if (z) zetas.push_back(*z);
      else have_roots = false;
    }
    std::vector<ElemVector> ts;
    for (std::size_t i = 0; i < ns.size() && have_roots; ++i) {
      ElemMatrix p = pk;
      for (std::size_t j = 0; j < ns.size(); ++j) {
        ElemMatrix act = kron(s1.declared_matrix(g.generators()[j]), identity_matrix(r, d2), r);
        p = mat_mul(detail::eigen_projector(act, ns[j], j == i ? zetas[j] : Element::one(r), r), p, r);
      }
      auto piece = image_basis(p, r);
      if (!piece || piece->rank() != 1) break;
      ts.push_back(piece->basis.column(0));
    }
    if (have_roots && ts.size() == ns.size()) {
      // monomials t^a must form a basis of the fixed ring
      ElemMatrix a = zero_matrix(r, n, n);
      std::vector<long> e(ns.size(), 0);
      bool ok = true;
      for (std::size_t col = 0; col < n && ok; ++col) {
        ElemVector m = one;
        for (std::size_t i = 0; i < ns.size(); ++i)
          for (long k = 0; k < e[i]; ++k) m = mult(m, ts[i]);
        auto c = fix->coords(m, r);
        if (!c) ok = false;
        else
          for (std::size_t i = 0; i < n; ++i) a(i, col) = (*c)[i];
        std::size_t i = 0;
        while (i < e.size() && ++e[i] == ns[i]) e[i++] = 0;
      }
      std::vector<Element> vs;
      for (std::size_t i = 0; i < ns.size() && ok; ++i) {
        ElemVector m = one;
        for (long k = 0; k < ns[i]; ++k) m = mult(m, ts[i]);
        for (std::size_t j = 1; j < d; ++j)
          if (!m[j].is_zero()) ok = false;
        vs.push_back(m[0]);
      }
      if (ok && is_unit(det(a, r)).is_unit()) {
        std::vector<std::string> vars;
        for (std::size_t i = 0; i < ns.size(); ++i) vars.push_back(ns.size() == 1 ? "t" : "t" + std::to_string(i + 1));
        Extension k = kummer_tower(r, ns, vs, zetas, vars);
        return Extension(r, k.ring(), s1.group(), k.images(), {});
      }
    }
  }
  // candidate primitive elements: basis vectors, then small combinations
  std::vector<ElemVector> cands;
  std::vector<ElemVector> fb;
  for (std::size_t k = 0; k < n; ++k) fb.push_back(fix->basis.column(k));
  for (const auto& v : fb) cands.push_back(v);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      for (long c : {1L, -1L, 2L, 3L}) {
        ElemVector v(d, Element::zero(r));
        for (std::size_t i = 0; i < d; ++i) v[i] = fb[a][i] + Element::integer(r, c) * fb[b][i];
        cands.push_back(v);
      }
  for (const auto& t : cands) {
    std::optional<long> tdeg;
    if (graded) {
      tdeg = homogeneous(t);
      if (!tdeg) continue;
    }
    std::vector<ElemVector> pw{one};
    for (std::size_t k = 1; k <= n; ++k) pw.push_back(mult(pw.back(), t));
    ElemMatrix a = zero_matrix(r, n, n);
    bool ok = true;
    for (std::size_t k = 0; k < n && ok; ++k) {
      auto c = fix->coords(pw[k], r);
      if (!c) ok = false;
      else
        for (std::size_t i = 0; i < n; ++i) a(i, k) = (*c)[i];
    }
    if (!ok) continue;
    auto u = is_unit(det(a, r));
    if (!u.is_unit()) continue;
    auto ainv = *inverse(a, r);
    auto in_powers = [&](const ElemVector& v) {
      auto c = fix->coords(v, r);
      if (!c) throw Error(ErrorCode::InternalContradiction, "element outside the fixed ring");
      return mat_vec(ainv, *c, r);
    };
    ElemVector top = in_powers(pw[n]);
    std::vector<Value> f;
    for (std::size_t k = 0; k < n; ++k) f.push_back((-top[k]).value());
    f.push_back(r->one());
    std::string var = detail::fresh_name("t", r->variables());
    std::optional<long> vdeg;
    if (r->graded()) vdeg = tdeg.value_or(0);
    RingPtr s = monic_quotient(r, var, f, vdeg);
    std::vector<GeneratorImages> images;
    for (auto gen : g.generators()) {
      ElemMatrix act = kron(s1.declared_matrix(gen), identity_matrix(r, d2), r);
      ElemVector c = in_powers(mat_vec(act, t, r));
      std::vector<Value> vals;
      for (const auto& x : c) vals.push_back(x.value());
      images.push_back({{var, Element(s, Value(std::move(vals)))}});
    }
    return Extension(r, s, s1.group(), images, {});
  }
  throw Error(ErrorCode::UnsupportedBase, "no primitive element found for the Harrison product");
}

// ---------------------------------------------------------------------------
// Harrison groups

enum class PicardKind { Trivial, Declared };

struct PicardWitness {
  PicardKind kind = PicardKind::Trivial;
  std::vector<Integer> invariants;  // Pic(R)[n] when declared
  std::string note;
};

struct HarrisonGroup {
  std::vector<KummerGroupPtr> kummer;  // one per cyclic factor
  std::vector<long> cyclic_factors;
  std::vector<Integer> orders;         // Kummer part, concatenated
  std::vector<Integer> picard;         // declared Picard part
  bool exact = true;                   // false when the Picard part is nontrivial
  std::string note;

  Integer order() const {
    Integer o = 1;
    for (const auto& x : orders) o *= x;
    for (const auto& x : picard) o *= x;
    return o;
  }
  std::string describe() const {
    std::vector<long> ds;
    for (const auto& o : orders) ds.push_back(o.get_si());
    std::string s = describe_invariants(ds);
    if (!exact) s += " (extended by Pic[n] part " + std::to_string(picard.size()) + " factors)";
    return s;
  }
};

inline HarrisonGroup harrison_cyclic(const RingPtr& r, long n, const std::optional<UnitGroupPresentation>& units,
                                     const PicardWitness& pic = {}) {
  if (!is_unit(Element::integer(r, n)).is_unit()) throw Error(ErrorCode::PreconditionFailed, "1/" + std::to_string(n) + " is not in " + r->key());
  auto kg = r->graded() ? graded_kummer_group(r, n, units) : kummer_group(r, n, units);
  if (!find_root_of_unity(kg->units, n)) throw Error(ErrorCode::RootOfUnityMissing, "no primitive " + std::to_string(n) + "-th root of unity in " + r->key());
  HarrisonGroup h;
  h.kummer.push_back(kg);
  h.cyclic_factors.push_back(n);
  h.orders = kg->orders;
  if (pic.kind == PicardKind::Declared && !pic.invariants.empty()) {
    h.picard = pic.invariants;
    h.exact = false;
    h.note = "Har(R,C_n) is an extension of Pic(R)[n] by Kumm_n(R); the extension is not resolved";
  } else {
    h.note = "Pic(R)[n] trivial: Har(R,C_n) = Kumm_n(R)";
  }
  return h;
}

inline HarrisonGroup harrison_abelian(const RingPtr& r, const GroupPtr& g, const std::optional<UnitGroupPresentation>& units,
                                      const PicardWitness& pic = {}) {
  if (!g->is_abelian()) throw Error(ErrorCode::PreconditionFailed, g->label() + " is not abelian");
  HarrisonGroup h;
  for (long d : invariant_factors(*g)) {
    if (d == 1) continue;
    auto c = harrison_cyclic(r, d, units, pic);
    h.kummer.push_back(c.kummer[0]);
    h.cyclic_factors.push_back(d);
    h.orders.insert(h.orders.end(), c.orders.begin(), c.orders.end());
    h.picard.insert(h.picard.end(), c.picard.begin(), c.picard.end());
    h.exact = h.exact && c.exact;
  }
  h.note = h.exact ? "product of the cyclic answers over the invariant factors" : "Picard part not resolved";
  return h;
}

/// A Harrison element of an abelian group, one Kummer class per cyclic factor,
/// realized as the Kummer tower.
inline Extension harrison_model(const HarrisonGroup& h, const std::vector<KummerClass>& classes) {
  if (classes.size() != h.kummer.size()) throw Error(ErrorCode::ShapeMismatch, "one class per cyclic factor");
  std::vector<Element> us, zs;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    us.push_back(classes[i].representative);
    zs.push_back(*find_root_of_unity(h.kummer[i]->units, h.cyclic_factors[i]));
  }
  return kummer_tower(h.kummer[0]->ring, h.cyclic_factors, us, zs);
}

/// harrison_product(T_a, T_b) is isomorphic to T_ab as an extension.
inline MorphismResult check_product_law(const HarrisonGroup& h, const std::vector<KummerClass>& a,
                                        const std::vector<KummerClass>& b) {
  std::vector<KummerClass> ab;
  std::vector<Element> us, zs;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab.push_back(class_product(a[i], b[i]));
    us.push_back(ab.back().representative);
    zs.push_back(*find_root_of_unity(h.kummer[i]->units, h.cyclic_factors[i]));
  }
  Extension prod = harrison_product(harrison_model(h, a), harrison_model(h, b));
  Extension model = harrison_model(h, ab);
  return kummer_model_map(model, prod, h.kummer[0]->units, h.cyclic_factors, us, zs);
}

// ---------------------------------------------------------------------------
// Graded shifts

/// The suspension Sigma^k R_* as an invertible graded module: free of rank one
/// on a generator of degree k.
struct ShiftModule {
  FGModule module;
  long shift = 0;
};

inline ShiftModule shift_module(const RingPtr& r, long k) { return {FGModule::free(r, 1), k}; }

struct ShiftVerdict {
  long period = 0;        // gcd of unit degrees; Sigma^period R_* = R_*
  bool in_pic_n = false;  // Sigma^{nk} = R_*
  bool in_image = false;  // class of S^(1) for some R(n;u)
};

/// Shifts in Pic(R_*)[n] against the image of the classification map, which
/// only reaches Sigma^{deg(u)/n} with deg(u) = 0 mod 2n.
inline ShiftVerdict classify_shift(const ShiftModule& m, long n, const UnitGroupPresentation& units) {
  ShiftVerdict v;
  long g = 0;
  for (auto d : units.degrees) g = std::gcd(g, d);
  v.period = g;
  auto mod = [](long a, long b) { return b == 0 ? a : ((a % b) + b) % b; };
  v.in_pic_n = mod(n * m.shift, g) == 0;
  const long step = g == 0 ? 0 : std::lcm(g, 2 * n) / n;
  const long h = std::gcd(g, step);
  v.in_image = v.in_pic_n && mod(m.shift, h) == 0;
  return v;
}

}  // namespace galois
