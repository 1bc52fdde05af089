#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "galois/extension.hpp"
#include "galois/units.hpp"

namespace galois {

enum class Check { Pass, Fail, Undecided, Skipped };

inline const char* to_string(Check c) {
  switch (c) {
    case Check::Pass: return "PASS";
    case Check::Fail: return "FAIL";
    case Check::Undecided: return "UNDECIDED";
    case Check::Skipped: return "SKIPPED";
  }
  return "?";
}

/// M[a][j] = a(b_j) over S, rows indexed by group elements.
inline ElemMatrix theta_matrix(const Extension& ext) {
  const auto& g = *ext.group();
  ElemMatrix m = zero_matrix(ext.ring(), g.order(), ext.rank());
  for (std::size_t a = 0; a < g.order(); ++a)
    for (std::size_t j = 0; j < ext.rank(); ++j) m(a, j) = ext.apply(a, ext.basis()[j]);
  return m;
}

inline bool order_is_unit(const Extension& ext) {
  return is_unit(Element::integer(ext.base(), static_cast<long>(ext.group()->order()))).is_unit();
}

/// Norm N_{S/R}(s) = det of multiplication by s.
inline Element norm(const Extension& ext, const Element& s) { return det(ext.mult_matrix(s), ext.base()); }

/// Primes of the base (Z or Z[1/n]) dividing the norm of a non-unit.
inline std::vector<Integer> ramified_primes(const Extension& ext, const Element& d) {
  auto s = as_pid(ext.base());
  if (!s || s->finite() || s->scalar_kind() == ScalarKind::Rationals) return {};
  Element n = norm(ext, d);
  Integer num = abs(n.value().scalar().get_num());
  if (num == 0) return {};
  std::vector<Integer> out;
  for (const auto& p : prime_support(num))
    if (!s->inverted_primes().count(p)) out.push_back(p);
  return out;
}

struct G2Result {
  Check status = Check::Undecided;
  std::optional<Element> det;
  std::optional<Element> det_inverse;
  std::string diagnosis;
};

/// Theta is left S-linear between free S-modules of rank |G|, so it is
/// bijective iff det(theta_matrix) is a unit of S.
inline G2Result check_G2(const Extension& ext, const UnitGroupPresentation* s_units = nullptr) {
  G2Result r;
  if (ext.rank() != ext.group()->order()) {
    r.status = Check::Fail;
    r.diagnosis = std::string(to_string(ErrorCode::RankMismatch)) + ": rank " + std::to_string(ext.rank()) + " != |G| = " + std::to_string(ext.group()->order());
    return r;
  }
  Element d = det(theta_matrix(ext), ext.ring());
  r.det = d;
  auto u = is_unit(d, s_units);
  if (u.status == UnitStatus::Unit) {
    r.status = Check::Pass;
    r.det_inverse = u.inverse;
    r.diagnosis = "det(Theta) = " + d.str() + " is a unit of S";
  } else if (u.status == UnitStatus::NonUnit) {
    r.status = Check::Fail;
    r.diagnosis = "det(Theta) = " + d.str() + " is not a unit of S";
    auto ps = ramified_primes(ext, d);
    if (!ps.empty()) {
      r.diagnosis += " (ramification at the prime";
      if (ps.size() > 1) r.diagnosis += "s";
      for (std::size_t i = 0; i < ps.size(); ++i) r.diagnosis += (i ? ", " : " ") + ps[i].get_str();
      r.diagnosis += ")";
    }
  } else {
    r.status = Check::Undecided;
    r.diagnosis = "cannot decide whether det(Theta) = " + d.str() + " is a unit";
  }
  return r;
}

namespace detail {

/// Generators of {x : A x = 0} over the base, where the base is a scalar
/// principal ideal ring, a product of such, or a Laurent ring and A has
/// constant coefficients.
inline std::optional<ElemMatrix> base_kernel(const ElemMatrix& a, const RingPtr& r) {
  if (as_pid(r)) return pid_kernel(a, r);
  if (auto l = std::dynamic_pointer_cast<const LaurentRing>(r)) {
    ElemMatrix c = zero_matrix(l->base(), a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < a.cols(); ++j) {
        const auto& rep = a(i, j).value().laurent();
        if (rep.coeffs.empty()) continue;
        if (rep.low != 0 || rep.coeffs.size() != 1) return std::nullopt;
        c(i, j) = Element(l->base(), rep.coeffs[0]);
      }
    auto k = base_kernel(c, l->base());
    if (!k) return std::nullopt;
    return k->map([&](const Element& x) { return coerce(x, r); });
  }
  if (auto p = std::dynamic_pointer_cast<const ProductRing>(r)) {
    std::vector<ElemMatrix> parts;
    std::size_t cols = 0;
    for (std::size_t f = 0; f < p->size(); ++f) {
      const RingPtr& fr = p->factors()[f];
      ElemMatrix c = a.map([&](const Element& x) { return Element(fr, x.value().vec()[f]); });
      auto k = base_kernel(c, fr);
      if (!k) return std::nullopt;
      cols += k->cols();
      parts.push_back(std::move(*k));
    }
    ElemMatrix out = zero_matrix(r, a.cols(), cols);
    std::size_t off = 0;
    for (std::size_t f = 0; f < parts.size(); ++f) {
      for (std::size_t i = 0; i < a.cols(); ++i)
        for (std::size_t j = 0; j < parts[f].cols(); ++j) {
          std::vector<Value> t = r->zero().vec();
          t[f] = parts[f](i, j).value();
          out(i, off + j) = Element(r, Value(std::move(t)));
        }
      off += parts[f].cols();
    }
    return out;
  }
  return std::nullopt;
}

}  // namespace detail

struct G1Result {
  Check status = Check::Undecided;
  std::string method;
  std::optional<Element> witness;  // fixed element outside R
  std::string diagnosis;
};

/// S^G = R, decided through the averaging projector when |G| is a unit and
/// through a kernel computation over the base otherwise.
inline G1Result check_G1(const Extension& ext) {
  G1Result res;
  const RingPtr& r = ext.base();
  const auto& g = *ext.group();
  const std::size_t d = ext.rank();
  auto n_inv = is_unit(Element::integer(r, static_cast<long>(g.order())));
  auto reject = [&](const ElemVector& v) {
    res.status = Check::Fail;
    res.witness = ext.from_declared(v);
    res.diagnosis = "fixed element " + res.witness->str() + " is not in R";
  };
  if (n_inv.is_unit()) {
    res.method = "averaging projector";
    ElemMatrix p = zero_matrix(r, d, d);
    for (std::size_t a = 0; a < g.order(); ++a) p = add(p, ext.declared_matrix(a));
    p = scale(p, *n_inv.inverse);
    for (std::size_t j = 0; j < d; ++j) {
      auto col = p.column(j);
      for (std::size_t i = 1; i < d; ++i)
        if (!col[i].is_zero()) {
          reject(col);
          return res;
        }
    }
    res.status = Check::Pass;
    res.diagnosis = "S^G = R";
    return res;
  }
  res.method = "kernel of stacked (g - 1)";
  ElemMatrix stack = zero_matrix(r, 0, d);
  for (std::size_t a = 1; a < g.order(); ++a)
    stack = vstack(stack, subtract(ext.declared_matrix(a), identity_matrix(r, d)), Element::zero(r));
  std::optional<ElemMatrix> k;
  try {
    k = detail::base_kernel(stack, r);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::UnsupportedBase) throw;
  }
  if (!k) {
    res.status = Check::Undecided;
    res.diagnosis = std::string(to_string(ErrorCode::UnsupportedBase)) + ": no kernel algorithm over " + r->key();
    return res;
  }
  for (std::size_t j = 0; j < k->cols(); ++j) {
    auto col = k->column(j);
    for (std::size_t i = 1; i < d; ++i)
      if (!col[i].is_zero()) {
        reject(col);
        return res;
      }
  }
  res.status = Check::Pass;
  res.diagnosis = "S^G = R";
  return res;
}

// ---------------------------------------------------------------------------
// Separability elements

struct SeparabilityWitness {
  std::vector<Element> u;
  std::vector<Element> v;
};

/// sum_i u_i * a(v_i) = 1 for a = e and 0 otherwise.
inline bool check_separability_witness(const Extension& ext, const SeparabilityWitness& w) {
  if (w.u.size() != w.v.size()) return false;
  const auto& g = *ext.group();
  for (std::size_t a = 0; a < g.order(); ++a) {
    Element s = Element::zero(ext.ring());
    for (std::size_t i = 0; i < w.u.size(); ++i) s = s + w.u[i] * ext.apply(a, w.v[i]);
    if (a == g.identity() ? !s.is_one() : !s.is_zero()) return false;
  }
  return true;
}

/// Looks for u with v = declared basis: exact solve of u * Theta^T = delta when
/// det(Theta) is a unit, exhaustive search over finite S, otherwise a bounded
/// search over coefficients in [-bound, bound] (with denominators |G| when
/// |G| is a unit of R).
inline std::optional<SeparabilityWitness> find_separability_witness(const Extension& ext, long bound = 2,
                                                                    const UnitGroupPresentation* s_units = nullptr) {
  const auto& g = *ext.group();
  const std::size_t d = ext.rank();
  const RingPtr& s = ext.ring();
  SeparabilityWitness w;
  w.v = ext.basis();
  if (d == g.order()) {
    ElemMatrix theta = theta_matrix(ext);
    auto du = is_unit(det(theta, s), s_units);
    if (du.is_unit()) {
      // u^T Theta^T = delta^T  <=>  Theta u = delta (as column)
      ElemMatrix adj = adjugate(theta, Element::zero(s), Element::one(s));
      ElemVector delta(g.order(), Element::zero(s));
      delta[g.identity()] = Element::one(s);
      w.u = mat_vec(scale(adj, *du.inverse), delta, s);
      if (check_separability_witness(ext, w)) return w;
    }
  }
  // u_1 = 1 - sum_{j>=2} u_j b_j makes the identity component hold
  auto complete = [&](const std::vector<Element>& tail) {
    Element u1 = Element::one(s);
    for (std::size_t j = 1; j < d; ++j) u1 = u1 - tail[j - 1] * ext.basis()[j];
    SeparabilityWitness c;
    c.v = w.v;
    c.u.push_back(u1);
    c.u.insert(c.u.end(), tail.begin(), tail.end());
    return c;
  };
  std::vector<Element> candidates;
  if (auto all = s->enumerate()) {
    if (std::pow(static_cast<double>(all->size()), static_cast<double>(d - 1)) > 2e6) return std::nullopt;
    for (auto& x : *all) candidates.emplace_back(s, x);
  } else {
    // coefficient box in the declared basis
    std::vector<Element> coeffs;
    const RingPtr& r = ext.base();
    Element step = Element::one(r);
    if (order_is_unit(ext)) step = *is_unit(Element::integer(r, static_cast<long>(g.order()))).inverse;
    long scale_n = order_is_unit(ext) ? static_cast<long>(g.order()) : 1;
    for (long k = -bound * scale_n; k <= bound * scale_n; ++k) coeffs.push_back(Element::integer(r, k) * step);
    double count = std::pow(static_cast<double>(coeffs.size()), static_cast<double>(d));
    if (count > 20000) return std::nullopt;
    std::vector<std::size_t> idx(d, 0);
    for (;;) {
      ElemVector c;
      for (auto i : idx) c.push_back(coeffs[i]);
      candidates.push_back(ext.from_declared(c));
      std::size_t k = 0;
      while (k < d && ++idx[k] == coeffs.size()) idx[k++] = 0;
      if (k == d) break;
    }
  }
  if (std::pow(static_cast<double>(candidates.size()), static_cast<double>(d - 1)) > 2e6) return std::nullopt;
  std::vector<std::size_t> idx(d - 1, 0);
  for (;;) {
    std::vector<Element> tail;
    for (auto i : idx) tail.push_back(candidates[i]);
    auto c = complete(tail);
    if (check_separability_witness(ext, c)) return c;
    std::size_t k = 0;
    while (k < idx.size() && ++idx[k] == candidates.size()) idx[k++] = 0;
    if (k == idx.size()) break;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Trace

inline Element trace(const Extension& ext, const Element& s) {
  Element t = Element::zero(ext.ring());
  for (std::size_t a = 0; a < ext.group()->order(); ++a) t = t + ext.apply(a, s);
  auto r = ext.to_base(t);
  if (!r) throw Error(ErrorCode::TraceNotInBase, "tr(" + s.str() + ") = " + t.str());
  return *r;
}

struct TraceResult {
  Check status = Check::Undecided;  // Pass = witness, Fail = no witness exists
  std::optional<Element> witness;
  std::optional<Element> image_generator;
  std::string diagnosis;
};

inline TraceResult trace_surjectivity(const Extension& ext) {
  TraceResult res;
  const RingPtr& r = ext.base();
  auto n = is_unit(Element::integer(r, static_cast<long>(ext.group()->order())));
  if (n.is_unit()) {
    res.witness = ext.lift(*n.inverse);
    res.image_generator = Element::one(r);
  } else if (as_pid(r)) {
    ElemVector t;
    for (const auto& b : ext.basis()) t.push_back(trace(ext, b));
    auto [g, coeffs] = pid_ideal_generator(t, r);
    res.image_generator = g;
    ElemMatrix row = zero_matrix(r, 1, t.size());
    for (std::size_t j = 0; j < t.size(); ++j) row(0, j) = t[j];
    auto x = pid_solve(row, {Element::one(r)}, r);
    if (x) {
      res.witness = ext.from_declared(*x);
    } else {
      res.status = Check::Fail;
      res.diagnosis = "trace image is the ideal (" + g.str() + ") of " + r->key() + "; no element has trace 1";
      return res;
    }
  } else {
    res.status = Check::Undecided;
    res.diagnosis = "no surjectivity procedure over " + r->key();
    return res;
  }
  if (!trace(ext, *res.witness).is_one()) throw Error(ErrorCode::InternalContradiction, "trace witness");
  res.status = Check::Pass;
  res.diagnosis = "tr(" + res.witness->str() + ") = 1";
  return res;
}

// ---------------------------------------------------------------------------
// S#G -> End_R(S)

struct EndoResult {
  Check status = Check::Undecided;
  std::optional<Element> det;
  std::string diagnosis;
};

inline EndoResult twisted_endo_check(const Extension& ext) {
  EndoResult res;
  const auto& g = *ext.group();
  const std::size_t d = ext.rank();
  const RingPtr& r = ext.base();
  if (d != g.order()) {
    res.status = Check::Fail;
    res.diagnosis = std::string(to_string(ErrorCode::RankMismatch)) + ": rank " + std::to_string(d) + " != |G|";
    return res;
  }
  ElemMatrix j = zero_matrix(r, d * d, d * d);
  std::size_t col = 0;
  for (std::size_t i = 0; i < d; ++i) {
    ElemMatrix mult = mat_mul(ext.basis_inverse(), mat_mul(ext.mult_matrix(ext.basis()[i]), ext.basis_matrix(), r), r);
    for (std::size_t a = 0; a < g.order(); ++a, ++col) {
      ElemMatrix m = mat_mul(mult, ext.declared_matrix(a), r);
      for (std::size_t p = 0; p < d; ++p)
        for (std::size_t q = 0; q < d; ++q) j(p * d + q, col) = m(p, q);
    }
  }
  Element dj = det(j, r);
  res.det = dj;
  auto u = is_unit(dj);
  res.status = u.status == UnitStatus::Unit ? Check::Pass : u.status == UnitStatus::NonUnit ? Check::Fail : Check::Undecided;
  res.diagnosis = "det = " + dj.str() + (res.status == Check::Pass ? " is a unit of R" : res.status == Check::Fail ? " is not a unit of R" : " (undecided)");
  return res;
}

// ---------------------------------------------------------------------------
// Certification

enum class Verdict { Valid, Invalid, Incomplete };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Valid: return "VALID";
    case Verdict::Invalid: return "INVALID";
    case Verdict::Incomplete: return "INCOMPLETE";
  }
  return "?";
}

struct GaloisCertificate {
  Verdict verdict = Verdict::Incomplete;
  bool action_valid = false;
  std::string action_diagnosis;
  G1Result g1;
  G2Result g2;
  Check witness_check = Check::Skipped;
  std::optional<SeparabilityWitness> witness;
  TraceResult trace;
  EndoResult endo;
  std::vector<std::string> diagnostics;
};

struct CertifyOptions {
  long search_bound = 2;
  const UnitGroupPresentation* s_units = nullptr;
  bool search_witness = true;
};

inline GaloisCertificate certify(const Extension& ext, const std::optional<SeparabilityWitness>& given = std::nullopt,
                                 const CertifyOptions& opt = {}) {
  GaloisCertificate c;
  auto act = verify_action(ext);
  c.action_valid = act.valid;
  if (!act.valid) {
    c.verdict = Verdict::Invalid;
    c.action_diagnosis = std::string(to_string(*act.code)) + ": " + act.detail;
    c.diagnostics.push_back("action: " + c.action_diagnosis);
    return c;
  }
  c.action_diagnosis = "valid action";
  c.g1 = check_G1(ext);
  c.g2 = check_G2(ext, opt.s_units);
  if (given) {
    c.witness_check = check_separability_witness(ext, *given) ? Check::Pass : Check::Fail;
    if (c.witness_check == Check::Pass) c.witness = given;
  }
  if (!c.witness && opt.search_witness && c.g2.status != Check::Fail) {
    auto w = find_separability_witness(ext, opt.search_bound, opt.s_units);
    if (w) {
      c.witness = w;
      c.witness_check = Check::Pass;
    } else if (c.witness_check == Check::Skipped) {
      c.witness_check = Check::Undecided;
    }
  }
  if (c.g2.status == Check::Fail && c.witness_check == Check::Pass)
    throw Error(ErrorCode::InternalContradiction, "separability witness exists but det(Theta) is not a unit");
  c.trace = trace_surjectivity(ext);
  if (ext.rank() == ext.group()->order()) c.endo = twisted_endo_check(ext);
  const bool g2_ok = c.g2.status == Check::Pass || c.witness_check == Check::Pass;
  if (c.g1.status == Check::Pass && g2_ok)
    c.verdict = Verdict::Valid;
  else if (c.g1.status == Check::Fail || c.g2.status == Check::Fail)
    c.verdict = Verdict::Invalid;
  else
    c.verdict = Verdict::Incomplete;
  c.diagnostics.push_back(std::string("G-1 ") + to_string(c.g1.status) + ": " + c.g1.diagnosis);
  c.diagnostics.push_back(std::string("G-2 ") + to_string(c.g2.status) + ": " + c.g2.diagnosis);
  c.diagnostics.push_back(std::string("witness ") + to_string(c.witness_check));
  c.diagnostics.push_back(std::string("trace ") + to_string(c.trace.status) + ": " + c.trace.diagnosis);
  return c;
}

// ---------------------------------------------------------------------------
// Morphisms

/// Matrix on declared bases of the R-algebra map S1 -> S2 sending each ring
/// generator of S1 to the given element of S2.
inline ElemMatrix algebra_map_matrix(const Extension& e1, const Extension& e2, const GeneratorImages& images) {
  const RingPtr& r = e1.base();
  auto image_of = [&](const std::string& n) {
    auto it = images.find(n);
    if (it == images.end()) throw Error(ErrorCode::MalformedElement, "no image for generator " + n);
    return it->second;
  };
  std::vector<Element> nat;
  if (e1.shape() == Extension::Shape::Product) {
    for (const auto& n : e1.generator_names()) nat.push_back(image_of(n));
  } else {
    std::vector<Element> cur{Element::one(e2.ring())};
    for (const auto& l : e1.layers()) {
      Element x = image_of(l->var());
      std::vector<Element> next;
      Element xp = Element::one(e2.ring());
      for (std::size_t a = 0; a < l->degree(); ++a) {
        for (const auto& m : cur) next.push_back(xp * m);
        xp = xp * x;
      }
      cur = std::move(next);
    }
    nat = std::move(cur);
  }
  ElemMatrix m = zero_matrix(r, e2.rank(), e1.rank());
  for (std::size_t j = 0; j < nat.size(); ++j) {
    auto c = e2.coords(nat[j]);
    for (std::size_t i = 0; i < c.size(); ++i) m(i, j) = c[i];
  }
  return mat_mul(e2.basis_inverse(), mat_mul(m, e1.basis_matrix(), r), r);
}

enum class MorphismStatus { Iso, NotIso, NotEquivariant, NotAlgebraMap };

struct MorphismResult {
  MorphismStatus status = MorphismStatus::NotIso;
  std::optional<ElemMatrix> inverse;
  std::string diagnosis;
};

inline const char* to_string(MorphismStatus s) {
  switch (s) {
    case MorphismStatus::Iso: return "Iso";
    case MorphismStatus::NotIso: return "NotIso";
    case MorphismStatus::NotEquivariant: return "NotEquivariant";
    case MorphismStatus::NotAlgebraMap: return "NotAlgebraMap";
  }
  return "?";
}

/// phi: S1 -> S2 on declared bases. A G-equivariant algebra map between
/// Galois extensions is an isomorphism, so a singular phi between two
/// certified extensions raises InternalContradiction.
inline MorphismResult check_morphism_iso(const Extension& e1, const Extension& e2, const ElemMatrix& phi,
                                         bool both_certified = false) {
  MorphismResult res;
  const RingPtr& r = e1.base();
  if (!same_ring(r, e2.base()) || e1.group()->order() != e2.group()->order())
    throw Error(ErrorCode::DescriptorMismatch, "morphism between extensions of different data");
  if (phi.rows() != e2.rank() || phi.cols() != e1.rank()) throw Error(ErrorCode::ShapeMismatch, "morphism matrix");
  auto apply = [&](const Element& s) { return e2.from_declared(mat_vec(phi, e1.declared_coords(s), r)); };
  if (!apply(Element::one(e1.ring())).is_one()) {
    res.status = MorphismStatus::NotAlgebraMap;
    res.diagnosis = "phi(1) != 1";
    return res;
  }
  for (std::size_t i = 0; i < e1.rank(); ++i)
    for (std::size_t j = i; j < e1.rank(); ++j) {
      const Element& a = e1.basis()[i];
      const Element& b = e1.basis()[j];
      if (apply(a * b) != apply(a) * apply(b)) {
        res.status = MorphismStatus::NotAlgebraMap;
        res.diagnosis = "phi(" + a.str() + " * " + b.str() + ") != phi(" + a.str() + ") * phi(" + b.str() + ")";
        return res;
      }
    }
  for (std::size_t a = 0; a < e1.group()->order(); ++a)
    if (mat_mul(phi, e1.declared_matrix(a), r) != mat_mul(e2.declared_matrix(a), phi, r)) {
      res.status = MorphismStatus::NotEquivariant;
      res.diagnosis = "phi does not commute with " + e1.group()->name(a);
      return res;
    }
  auto inv = inverse(phi, r);
  if (!inv) {
    if (both_certified) throw Error(ErrorCode::InternalContradiction, "equivariant algebra map between Galois extensions is singular");
    res.status = MorphismStatus::NotIso;
    res.diagnosis = "det(phi) = " + det(phi, r).str() + " is not a unit";
    return res;
  }
  res.status = MorphismStatus::Iso;
  res.inverse = inv;
  res.diagnosis = "isomorphism";
  return res;
}

}  // namespace galois
