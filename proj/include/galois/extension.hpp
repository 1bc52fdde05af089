#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "galois/group.hpp"
#include "galois/linalg.hpp"
#include "galois/units.hpp"

namespace galois {

/// Images of the ring generators under one group generator: variable name
/// (or product idempotent e0, e1, ...) -> element of S.
using GeneratorImages = std::map<std::string, Element>;

/// S over R, where S is a tower of monic quotients over R or a finite
/// product of copies of R, with a declared R-basis (1 first) and a finite
/// group acting through images of the ring generators.
class Extension {
 public:
  enum class Shape { Tower, Product };

  Extension(RingPtr base, RingPtr ring, GroupPtr group, std::vector<GeneratorImages> images,
            std::vector<Element> basis)
      : base_(std::move(base)), ring_(std::move(ring)), group_(std::move(group)), images_(std::move(images)) {
    analyse_shape();
    if (images_.size() != group_->generators().size())
      throw Error(ErrorCode::ShapeMismatch, "need images for " + std::to_string(group_->generators().size()) + " group generators");
    nat_ = natural_basis_elements();
    if (basis.empty()) {
      basis = nat_;
      if (shape_ == Shape::Product) basis[0] = Element::one(ring_);
    }
    set_basis(basis);
    build_matrices();
  }

  const RingPtr& base() const { return base_; }
  const RingPtr& ring() const { return ring_; }
  const GroupPtr& group() const { return group_; }
  Shape shape() const { return shape_; }
  std::size_t rank() const { return dim_; }
  const std::vector<std::shared_ptr<const QuotientRing>>& layers() const { return layers_; }
  const std::vector<GeneratorImages>& images() const { return images_; }

  const std::vector<Element>& natural_basis() const { return nat_; }
  const std::vector<Element>& basis() const { return basis_; }
  /// Columns: natural coordinates of the declared basis.
  const ElemMatrix& basis_matrix() const { return bmat_; }
  const ElemMatrix& basis_inverse() const { return binv_; }

  /// Names of the ring generators that an action must assign.
  std::vector<std::string> generator_names() const {
    std::vector<std::string> out;
    if (shape_ == Shape::Product)
      for (std::size_t i = 0; i < dim_; ++i) out.push_back("e" + std::to_string(i));
    else
      for (const auto& l : layers_) out.push_back(l->var());
    return out;
  }

  Element lift(const Element& r) const { return coerce(r, ring_); }

  /// Coordinates of s in the natural basis (monomials or idempotents).
  ElemVector coords(const Element& s) const {
    if (!same_ring(s.ring(), ring_)) throw Error(ErrorCode::DescriptorMismatch, s.ring()->key() + " is not " + ring_->key());
    if (shape_ == Shape::Product) {
      ElemVector out;
      for (const auto& v : s.value().vec()) out.emplace_back(base_, v);
      return out;
    }
    return tower_coords(layers_.size(), s.value());
  }
  Element from_coords(const ElemVector& c) const {
    if (c.size() != dim_) throw Error(ErrorCode::ShapeMismatch, "coordinate vector");
    Element out = Element::zero(ring_);
    for (std::size_t i = 0; i < dim_; ++i)
      if (!c[i].is_zero()) out = out + lift(c[i]) * nat_[i];
    return out;
  }
  ElemVector declared_coords(const Element& s) const { return mat_vec(binv_, coords(s), base_); }
  Element from_declared(const ElemVector& c) const { return from_coords(mat_vec(bmat_, c, base_)); }

  /// Matrix of the group element a on natural coordinates.
  const ElemMatrix& matrix(std::size_t a) const { return mats_[a]; }
  /// Matrix of a on the declared basis.
  ElemMatrix declared_matrix(std::size_t a) const { return mat_mul(binv_, mat_mul(mats_[a], bmat_, base_), base_); }

  Element apply(std::size_t a, const Element& s) const { return from_coords(mat_vec(mats_[a], coords(s), base_)); }

  /// Matrix of multiplication by s on natural coordinates.
  ElemMatrix mult_matrix(const Element& s) const {
    ElemMatrix m = zero_matrix(base_, dim_, dim_);
    for (std::size_t j = 0; j < dim_; ++j) {
      auto c = coords(s * nat_[j]);
      for (std::size_t i = 0; i < dim_; ++i) m(i, j) = c[i];
    }
    return m;
  }

  /// Image of s under the substitution defined by the images of generator gi.
  Element substitute(std::size_t gi, const Element& s) const {
    return from_coords(mat_vec(gen_mats_[gi], coords(s), base_));
  }
  const ElemMatrix& generator_matrix(std::size_t gi) const { return gen_mats_[gi]; }

  /// The element of S corresponding to the name (variable or e_i).
  Element generator_element(const std::string& name) const {
    auto e = detail::named_element(ring_, name);
    if (!e) throw Error(ErrorCode::MalformedElement, "no generator " + name + " in " + ring_->key());
    return *e;
  }

  bool contains_base(const Element& s) const {
    auto c = declared_coords(s);
    for (std::size_t i = 1; i < c.size(); ++i)
      if (!c[i].is_zero()) return false;
    return true;
  }
  /// The base-ring element s, when s lies in R = R*1.
  std::optional<Element> to_base(const Element& s) const {
    if (!contains_base(s)) return std::nullopt;
    return declared_coords(s)[0];
  }

 private:
  void analyse_shape() {
    if (auto p = std::dynamic_pointer_cast<const ProductRing>(ring_)) {
      for (const auto& f : p->factors())
        if (!same_ring(f, base_))
          throw Error(ErrorCode::UnsupportedBase, "product factors must equal the base " + base_->key());
      shape_ = Shape::Product;
      dim_ = p->size();
      return;
    }
    shape_ = Shape::Tower;
    RingPtr cur = ring_;
    std::vector<std::shared_ptr<const QuotientRing>> rev;
    while (!same_ring(cur, base_)) {
      auto q = std::dynamic_pointer_cast<const QuotientRing>(cur);
      if (!q) throw Error(ErrorCode::UnsupportedBase, ring_->key() + " is not a monic tower over " + base_->key());
      rev.push_back(q);
      cur = q->base();
    }
    layers_.assign(rev.rbegin(), rev.rend());
    dim_ = 1;
    for (const auto& l : layers_) dim_ *= l->degree();
  }

  ElemVector tower_coords(std::size_t level, const Value& v) const {
    if (level == 0) return {Element(base_, v)};
    ElemVector out;
    for (const auto& c : v.vec()) {
      auto sub = tower_coords(level - 1, c);
      out.insert(out.end(), sub.begin(), sub.end());
    }
    return out;
  }

  std::vector<Element> natural_basis_elements() const {
    std::vector<Element> out;
    if (shape_ == Shape::Product) {
      auto p = std::dynamic_pointer_cast<const ProductRing>(ring_);
      for (std::size_t i = 0; i < dim_; ++i) out.emplace_back(ring_, p->idempotent(i));
      return out;
    }
    // index = a_k * D_(k-1) + (index in lower layers)
    std::vector<Element> cur{Element::one(ring_)};
    for (const auto& l : layers_) {
      Element x = generator_element(l->var());
      std::vector<Element> next;
      Element xp = Element::one(ring_);
      for (std::size_t a = 0; a < l->degree(); ++a) {
        for (const auto& m : cur) next.push_back(xp * m);
        xp = xp * x;
      }
      cur = std::move(next);
    }
    return cur;
  }

  void set_basis(const std::vector<Element>& basis) {
    if (basis.size() != dim_)
      throw Error(ErrorCode::BasisNotSpanning, "basis has " + std::to_string(basis.size()) + " elements, rank is " + std::to_string(dim_));
    if (!basis[0].is_one()) throw Error(ErrorCode::BasisNotSpanning, "the first basis element must be 1");
    basis_ = basis;
    bmat_ = zero_matrix(base_, dim_, dim_);
    for (std::size_t j = 0; j < dim_; ++j) {
      auto c = coords(basis_[j]);
      for (std::size_t i = 0; i < dim_; ++i) bmat_(i, j) = c[i];
    }
    std::optional<ElemMatrix> inv;
    try {
      inv = inverse(bmat_, base_);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::Undecided) throw;
    }
    if (!inv) throw Error(ErrorCode::BasisNotSpanning, "declared basis is not an R-basis of " + ring_->key());
    binv_ = *inv;
  }

  Element generator_image(std::size_t gi, const std::string& name) const {
    auto it = images_[gi].find(name);
    if (it != images_[gi].end()) return it->second;
    return generator_element(name);  // unassigned generators are fixed
  }

  void build_matrices() {
    const auto names = generator_names();
    for (std::size_t gi = 0; gi < images_.size(); ++gi) {
      for (const auto& [k, v] : images_[gi]) {
        if (std::find(names.begin(), names.end(), k) == names.end())
          throw Error(ErrorCode::MalformedElement, "action assigns unknown generator " + k);
        if (!same_ring(v.ring(), ring_)) throw Error(ErrorCode::DescriptorMismatch, "image of " + k);
      }
      ElemMatrix m = zero_matrix(base_, dim_, dim_);
      if (shape_ == Shape::Product) {
        for (std::size_t j = 0; j < dim_; ++j) {
          auto c = coords(generator_image(gi, names[j]));
          for (std::size_t i = 0; i < dim_; ++i) m(i, j) = c[i];
        }
      } else {
        std::vector<Element> cur{Element::one(ring_)};
        for (const auto& l : layers_) {
          Element x = generator_image(gi, l->var());
          std::vector<Element> next;
          Element xp = Element::one(ring_);
          for (std::size_t a = 0; a < l->degree(); ++a) {
            for (const auto& mono : cur) next.push_back(xp * mono);
            xp = xp * x;
          }
          cur = std::move(next);
        }
        for (std::size_t j = 0; j < dim_; ++j) {
          auto c = coords(cur[j]);
          for (std::size_t i = 0; i < dim_; ++i) m(i, j) = c[i];
        }
      }
      gen_mats_.push_back(std::move(m));
    }
    mats_.assign(group_->order(), identity_matrix(base_, dim_));
    for (std::size_t a = 0; a < group_->order(); ++a)
      for (auto gi : group_->word(a)) mats_[a] = mat_mul(mats_[a], gen_mats_[gi], base_);
  }

  RingPtr base_, ring_;
  GroupPtr group_;
  std::vector<GeneratorImages> images_;
  Shape shape_ = Shape::Tower;
  std::size_t dim_ = 0;
  std::vector<std::shared_ptr<const QuotientRing>> layers_;
  std::vector<Element> nat_, basis_;
  ElemMatrix bmat_, binv_;
  std::vector<ElemMatrix> gen_mats_, mats_;
};

using ExtensionPtr = std::shared_ptr<const Extension>;

struct ActionReport {
  bool valid = true;
  std::optional<ErrorCode> code;
  std::string detail;
  /// Matrices of all group elements on the declared basis.
  std::vector<ElemMatrix> matrices;
};

/// Checks that every generator acts by an R-algebra automorphism and that
/// the generator matrices satisfy the relations of the Cayley table.
inline ActionReport verify_action(const Extension& ext) {
  ActionReport rep;
  const auto& g = *ext.group();
  const RingPtr& r = ext.base();
  auto fail = [&](ErrorCode c, std::string msg) {
    rep.valid = false;
    rep.code = c;
    rep.detail = std::move(msg);
    return rep;
  };
  for (std::size_t gi = 0; gi < g.generators().size(); ++gi) {
    const std::string gname = g.name(g.generators()[gi]);
    if (ext.shape() == Extension::Shape::Product) {
      std::vector<Element> es;
      for (const auto& n : ext.generator_names()) es.push_back(ext.substitute(gi, ext.generator_element(n)));
      if (!complete_orthogonal_idempotents(es))
        return fail(ErrorCode::NotAutomorphism, gname + ": images of the idempotents are not a complete orthogonal family");
    } else {
      for (const auto& l : ext.layers()) {
        Element x = ext.substitute(gi, ext.generator_element(l->var()));
        Element acc = Element::zero(ext.ring());
        Element xp = Element::one(ext.ring());
        for (const auto& c : l->modulus()) {
          Element coeff = ext.substitute(gi, coerce(Element(l->base(), c), ext.ring()));
          acc = acc + coeff * xp;
          xp = xp * x;
        }
        if (!acc.is_zero())
          return fail(ErrorCode::NotAutomorphism, gname + ": " + l->var() + " -> " + x.str() + " gives f(" + x.str() + ") = " + acc.str() + " != 0");
        if (l->has_var_degree() || ext.ring()->graded()) {
          auto d = homogeneous_degree(x);
          if (!x.is_zero() && (!d || *d != l->var_degree()))
            return fail(ErrorCode::NotAutomorphism, gname + ": image of " + l->var() + " is not homogeneous of degree " + std::to_string(l->var_degree()));
        }
      }
    }
    auto d = is_unit(det(ext.generator_matrix(gi), r));
    if (d.status != UnitStatus::Unit)
      return fail(ErrorCode::NotAutomorphism, gname + ": substitution is not bijective (determinant " + det(ext.generator_matrix(gi), r).str() + ")");
  }
  for (std::size_t a = 0; a < g.order(); ++a)
    for (std::size_t b = 0; b < g.order(); ++b)
      if (mat_mul(ext.matrix(a), ext.matrix(b), r) != ext.matrix(g.mul(a, b)))
        return fail(ErrorCode::RelationViolated, g.name(a) + " * " + g.name(b) + " = " + g.name(g.mul(a, b)));
  for (std::size_t a = 0; a < g.order(); ++a) rep.matrices.push_back(ext.declared_matrix(a));
  return rep;
}

/// Map(G, R) = product of |G| copies of R, with a . e_b = e_(ab).
/// Basis 1, e_1, ..., e_(n-1).
inline Extension trivial_extension(const RingPtr& r, const GroupPtr& g) {
  const std::size_t n = g->order();
  RingPtr s = n == 1 ? r : power(r, n);
  if (n == 1) return Extension(r, r, g, {}, {});
  std::vector<GeneratorImages> images;
  auto p = std::dynamic_pointer_cast<const ProductRing>(s);
  for (auto gen : g->generators()) {
    GeneratorImages im;
    for (std::size_t b = 0; b < n; ++b)
      im["e" + std::to_string(b)] = Element(s, p->idempotent(g->mul(gen, b)));
    images.push_back(std::move(im));
  }
  std::vector<Element> basis{Element::one(s)};
  for (std::size_t b = 1; b < n; ++b) basis.emplace_back(s, p->idempotent(b));
  return Extension(r, s, g, std::move(images), std::move(basis));
}

namespace detail {

inline std::string fresh_name(std::string name, const std::vector<std::string>& taken) {
  auto clash = [&](const std::string& s) { return std::find(taken.begin(), taken.end(), s) != taken.end(); };
  if (!clash(name)) return name;
  for (int k = 1;; ++k)
    if (!clash(name + "_" + std::to_string(k))) return name + "_" + std::to_string(k);
}

}  // namespace detail

/// Image in the rebuilt ring built[k] of an element of the k-th lower layer of ext.
inline Element map_into_tower(const Element& x, const Extension& ext, std::size_t k, const std::vector<RingPtr>& built);

/// T (x)_R S with the action on the second factor. T must receive the
/// canonical map from R; tower variables clashing with names in T are renamed.
inline Extension base_change(const Extension& ext, const RingPtr& t) {
  if (!try_coerce(Element::one(ext.base()), t))
    throw Error(ErrorCode::UnsupportedBase, t->key() + " is not an algebra over " + ext.base()->key());
  auto to_t = [&](const Element& x) { return coerce(x, t); };
  RingPtr s;
  std::vector<std::string> taken = t->variables();
  if (ext.shape() == Extension::Shape::Product) {
    s = power(t, ext.rank());
  } else {
    // rebuild every layer over the new base, mapping coefficients through coordinates
    RingPtr cur = t;
    std::vector<RingPtr> built{t};
    for (std::size_t k = 0; k < ext.layers().size(); ++k) {
      const auto& l = ext.layers()[k];
      std::string var = detail::fresh_name(l->var(), taken);
      taken.push_back(var);
      std::vector<Value> f;
      for (const auto& c : l->modulus()) {
        Element ce(l->base(), c);
        f.push_back(map_into_tower(ce, ext, k, built).value());
      }
      std::optional<long> deg;
      if (l->has_var_degree()) deg = l->var_degree();
      cur = monic_quotient(cur, var, f, deg);
      built.push_back(cur);
    }
    s = cur;
  }
  Extension skeleton(t, s, ext.group(), std::vector<GeneratorImages>(ext.group()->generators().size()), {});
  auto transport = [&](const Element& x) {
    ElemVector c;
    for (const auto& v : ext.coords(x)) c.push_back(to_t(v));
    return skeleton.from_coords(c);
  };
  std::vector<GeneratorImages> images;
  const auto old_names = ext.generator_names();
  const auto new_names = skeleton.generator_names();
  for (const auto& im : ext.images()) {
    GeneratorImages out;
    for (const auto& [name, val] : im) {
      auto pos = std::find(old_names.begin(), old_names.end(), name) - old_names.begin();
      out[new_names[static_cast<std::size_t>(pos)]] = transport(val);
    }
    images.push_back(std::move(out));
  }
  std::vector<Element> basis;
  for (const auto& b : ext.basis()) basis.push_back(transport(b));
  return Extension(t, s, ext.group(), std::move(images), std::move(basis));
}

inline Element map_into_tower(const Element& x, const Extension& ext, std::size_t k, const std::vector<RingPtr>& built) {
  if (k == 0) return coerce(x, built[0]);
  const auto& l = ext.layers()[k - 1];
  auto q = std::dynamic_pointer_cast<const QuotientRing>(built[k]);
  Element out = Element::zero(built[k]);
  Element xp = Element::one(built[k]);
  Element var(built[k], q->monomial(1));
  for (const auto& c : x.value().vec()) {
    Element lower = map_into_tower(Element(l->base(), c), ext, k - 1, built);
    out = out + coerce(lower, built[k]) * xp;
    xp = xp * var;
  }
  return out;
}

}  // namespace galois
