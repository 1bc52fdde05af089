#pragma once

#include <optional>
#include <string>
#include <vector>

#include "galois/linalg.hpp"

namespace galois {

/// A finitely generated module presented as a cokernel of R^r -> R^n:
/// Free(n) has no relations, IdempotentImage(E) is im E = coker(I - E), and
/// Presented(Rel) is coker(Rel) over a scalar principal ideal ring.
class FGModule {
 public:
  enum class Kind { Free, IdempotentImage, Presented };

  static FGModule free(const RingPtr& r, std::size_t n) {
    FGModule m(r, Kind::Free, n);
    m.rel_ = zero_matrix(r, n, 0);
    return m;
  }
  static FGModule idempotent_image(const RingPtr& r, const ElemMatrix& e) {
    if (e.rows() != e.cols()) throw Error(ErrorCode::ShapeMismatch, "idempotent must be square");
    if (mat_mul(e, e, r) != e) throw Error(ErrorCode::NotProjectivePresentation, "matrix is not idempotent");
    FGModule m(r, Kind::IdempotentImage, e.rows());
    m.e_ = e;
    m.rel_ = subtract(identity_matrix(r, e.rows()), e);
    return m;
  }
  static FGModule presented(const RingPtr& r, const ElemMatrix& relations) {
    if (!as_pid(r)) throw Error(ErrorCode::UnsupportedBase, "presented modules need a scalar base, not " + r->key());
    FGModule m(r, Kind::Presented, relations.rows());
    m.rel_ = relations;
    return m;
  }

  const RingPtr& base() const { return base_; }
  Kind kind() const { return kind_; }
  /// Number of generators (rank of the ambient free module).
  std::size_t ambient() const { return n_; }
  const ElemMatrix& idempotent() const { return e_; }
  const ElemMatrix& relations() const { return rel_; }
  bool projective_presentation() const { return kind_ != Kind::Presented; }

  /// The idempotent E with M = im E (identity for free modules).
  ElemMatrix projector() const { return kind_ == Kind::IdempotentImage ? e_ : identity_matrix(base_, n_); }

  /// True iff the ambient vector v is zero in M.
  bool is_zero_vector(const ElemVector& v) const {
    switch (kind_) {
      case Kind::Free:
        for (const auto& x : v)
          if (!x.is_zero()) return false;
        return true;
      case Kind::IdempotentImage:
        for (const auto& x : mat_vec(e_, v, base_))
          if (!x.is_zero()) return false;
        return true;
      case Kind::Presented:
        if (rel_.cols() == 0) return is_zero_free(v);
        return pid_solve(rel_, v, base_).has_value();
    }
    return false;
  }

  std::string describe() const {
    switch (kind_) {
      case Kind::Free: return "Free(" + std::to_string(n_) + ") over " + base_->key();
      case Kind::IdempotentImage: return "IdempotentImage(" + std::to_string(n_) + ") over " + base_->key();
      case Kind::Presented: return "Presented(" + std::to_string(n_) + " generators, " + std::to_string(rel_.cols()) + " relations) over " + base_->key();
    }
    return "";
  }

 private:
  FGModule(RingPtr r, Kind k, std::size_t n) : base_(std::move(r)), kind_(k), n_(n) {}
  static bool is_zero_free(const ElemVector& v) {
    for (const auto& x : v)
      if (!x.is_zero()) return false;
    return true;
  }

  RingPtr base_;
  Kind kind_;
  std::size_t n_;
  ElemMatrix e_;
  ElemMatrix rel_;
};

/// Linear map given on ambient generators: column j is the image of generator j.
struct ModuleHom {
  FGModule domain;
  FGModule codomain;
  ElemMatrix matrix;
};

inline ModuleHom make_hom(const FGModule& dom, const FGModule& cod, const ElemMatrix& f) {
  if (f.rows() != cod.ambient() || f.cols() != dom.ambient())
    throw Error(ErrorCode::ShapeMismatch, "hom matrix is " + std::to_string(f.rows()) + "x" + std::to_string(f.cols()));
  return {dom, cod, f};
}

/// Relations of the domain go to zero in the codomain.
inline bool well_defined(const ModuleHom& h) {
  const auto& rel = h.domain.relations();
  const RingPtr& r = h.domain.base();
  ElemMatrix img = mat_mul(h.matrix, rel, r);
  for (std::size_t j = 0; j < img.cols(); ++j)
    if (!h.codomain.is_zero_vector(img.column(j))) return false;
  return true;
}

inline bool hom_equal(const ModuleHom& f, const ModuleHom& g) {
  const RingPtr& r = f.domain.base();
  ElemMatrix diff = mat_mul(subtract(f.matrix, g.matrix), f.domain.projector(), r);
  for (std::size_t j = 0; j < diff.cols(); ++j)
    if (!f.codomain.is_zero_vector(diff.column(j))) return false;
  return true;
}

inline ModuleHom identity_hom(const FGModule& m) { return {m, m, identity_matrix(m.base(), m.ambient())}; }

inline ModuleHom compose(const ModuleHom& g, const ModuleHom& f) {
  if (g.domain.ambient() != f.codomain.ambient()) throw Error(ErrorCode::ShapeMismatch, "compose");
  return {f.domain, g.codomain, mat_mul(g.matrix, f.matrix, f.domain.base())};
}

inline FGModule tensor(const FGModule& m, const FGModule& n) {
  if (!same_ring(m.base(), n.base())) throw Error(ErrorCode::DescriptorMismatch, "tensor over different bases");
  const RingPtr& r = m.base();
  if (m.kind() == FGModule::Kind::Free && n.kind() == FGModule::Kind::Free) return FGModule::free(r, m.ambient() * n.ambient());
  if (m.projective_presentation() && n.projective_presentation())
    return FGModule::idempotent_image(r, kron(m.projector(), n.projector(), r));
  ElemMatrix a = kron(m.relations(), identity_matrix(r, n.ambient()), r);
  ElemMatrix b = kron(identity_matrix(r, m.ambient()), n.relations(), r);
  return FGModule::presented(r, hstack(a, b, Element::zero(r)));
}

inline ModuleHom tensor(const ModuleHom& f, const ModuleHom& g) {
  return {tensor(f.domain, g.domain), tensor(f.codomain, g.codomain), kron(f.matrix, g.matrix, f.domain.base())};
}

/// Hom(M, R) in dual coordinates. Presented modules go through the kernel of
/// the transposed relations and come back as a Presented module without relations.
inline FGModule dual_module(const FGModule& m) {
  const RingPtr& r = m.base();
  switch (m.kind()) {
    case FGModule::Kind::Free: return FGModule::free(r, m.ambient());
    case FGModule::Kind::IdempotentImage: return FGModule::idempotent_image(r, transpose(m.idempotent()));
    case FGModule::Kind::Presented: {
      ElemMatrix k = pid_kernel(transpose(m.relations()), r);
      return FGModule::presented(r, zero_matrix(r, k.cols(), 0));
    }
  }
  return m;
}

/// Functionals spanning Hom(M, R), as rows over the ambient generators of M.
inline ElemMatrix dual_basis_functionals(const FGModule& m) {
  const RingPtr& r = m.base();
  switch (m.kind()) {
    case FGModule::Kind::Free: return identity_matrix(r, m.ambient());
    case FGModule::Kind::IdempotentImage: return m.idempotent();
    case FGModule::Kind::Presented: return transpose(pid_kernel(transpose(m.relations()), r));
  }
  return {};
}

/// delta: M -> DDM on ambient coordinates.
inline ModuleHom double_dual_map(const FGModule& m) {
  if (!m.projective_presentation()) throw Error(ErrorCode::NotProjectivePresentation, "double dual of " + m.describe());
  return {m, dual_module(dual_module(m)), m.projector()};
}

/// Generators (columns, ambient coordinates) of ker f.
inline ElemMatrix kernel(const ModuleHom& f) {
  const RingPtr& r = f.domain.base();
  ElemMatrix a = hstack(f.matrix, f.codomain.relations(), Element::zero(r));
  ElemMatrix k = pid_kernel(a, r);
  ElemMatrix out = zero_matrix(r, f.domain.ambient(), k.cols());
  for (std::size_t i = 0; i < f.domain.ambient(); ++i)
    for (std::size_t j = 0; j < k.cols(); ++j) out(i, j) = k(i, j);
  return out;
}

/// Yes / No over scalar principal ideal rings; over other bases only a unit
/// determinant (Yes) is recognized.
inline UnitStatus is_surjective(const ModuleHom& f) {
  const RingPtr& r = f.domain.base();
  if (as_pid(r)) {
    ElemMatrix a = hstack(f.matrix, f.codomain.relations(), Element::zero(r));
    for (std::size_t i = 0; i < f.codomain.ambient(); ++i) {
      ElemVector e(f.codomain.ambient(), Element::zero(r));
      e[i] = Element::one(r);
      if (!pid_solve(a, e, r)) return UnitStatus::NonUnit;
    }
    return UnitStatus::Unit;
  }
  if (f.matrix.rows() == f.matrix.cols() && f.codomain.kind() == FGModule::Kind::Free &&
      is_unit(det(f.matrix, r)).is_unit())
    return UnitStatus::Unit;
  return UnitStatus::Undecided;
}

// ---------------------------------------------------------------------------
// Strong duality

/// eps: DP (x) P -> R as a 1 x (dp*p) row, eta: R -> P (x) DP as a (p*dp) x 1 column.
struct DualityDatum {
  FGModule P;
  FGModule DP;
  ElemMatrix eps;
  ElemMatrix eta;
};

inline DualityDatum canonical_duality(const FGModule& p) {
  const RingPtr& r = p.base();
  FGModule dp = dual_module(p);
  const std::size_t n = p.ambient(), m = dp.ambient();
  ElemMatrix f = dual_basis_functionals(p);  // m x n
  ElemMatrix eps = zero_matrix(r, 1, m * n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) eps(0, i * n + j) = f(i, j);
  ElemMatrix eta = zero_matrix(r, n * m, 1);
  if (p.projective_presentation()) {
    ElemMatrix e = p.projector();
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < m; ++b) eta(a * m + b, 0) = e(a, b);
  }
  return {p, dp, eps, eta};
}

struct DualityVerdict {
  bool p_side = false;
  bool dp_side = false;
  bool strongly_dualizable() const { return p_side && dp_side; }
  std::string str() const {
    if (strongly_dualizable()) return "StronglyDualizable";
    if (!p_side) return "TriangleFails(P-side)";
    return "TriangleFails(DP-side)";
  }
};

/// (id (x) eps)(eta (x) id) = id_P and (eps (x) id)(id (x) eta) = id_DP.
inline DualityVerdict check_strong_duality(const DualityDatum& d) {
  const RingPtr& r = d.P.base();
  const std::size_t n = d.P.ambient(), m = d.DP.ambient();
  if (d.eps.rows() != 1 || d.eps.cols() != m * n || d.eta.rows() != n * m || d.eta.cols() != 1)
    throw Error(ErrorCode::ShapeMismatch, "duality datum");
  DualityVerdict v;
  ElemMatrix c = mat_mul(kron(identity_matrix(r, n), d.eps, r), kron(d.eta, identity_matrix(r, n), r), r);
  v.p_side = hom_equal({d.P, d.P, c}, identity_hom(d.P));
  ElemMatrix c2 = mat_mul(kron(d.eps, identity_matrix(r, m), r), kron(identity_matrix(r, m), d.eta, r), r);
  v.dp_side = hom_equal({d.DP, d.DP, c2}, identity_hom(d.DP));
  return v;
}

/// Duality datum for a retract Q of P (r o j = id_Q), with the natural
/// evaluation of Q and eta' = (r (x) j*) eta.
inline DualityDatum retract_duality(const DualityDatum& dp, const ModuleHom& j, const ModuleHom& rr) {
  const FGModule& q = j.domain;
  if (!hom_equal(compose(rr, j), identity_hom(q))) throw Error(ErrorCode::NotRetract, "r o j is not the identity");
  if (!q.projective_presentation()) throw Error(ErrorCode::NotProjectivePresentation, q.describe());
  const RingPtr& r = q.base();
  DualityDatum out = canonical_duality(q);
  // j*: DP -> DQ is precomposition with j, i.e. the transpose in dual coordinates
  ElemMatrix jstar = transpose(j.matrix);
  out.eta = mat_mul(kron(rr.matrix, jstar, r), dp.eta, r);
  return out;
}

inline std::vector<std::vector<std::string>> matrix_strings(const ElemMatrix& a) {
  std::vector<std::vector<std::string>> out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out[i].push_back(a(i, j).str());
  return out;
}

}  // namespace galois
