#pragma once

#include <random>
#include <set>
#include <string>
#include <vector>

#include "galois/all.hpp"

namespace galois::testing {

inline std::string corpus(const std::string& name) { return std::string(GALOIS_SOURCE_DIR) + "/corpus/" + name; }

inline LoadedExtension load(const std::string& name) { return load_extension_file(corpus(name)); }

/// A random invertible integer matrix: a product of elementary operations.
inline ElemMatrix random_unimodular(std::mt19937_64& rng, const RingPtr& r, std::size_t n, int steps = 6) {
  ElemMatrix a = identity_matrix(r, n);
  if (n < 2) return a;
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::uniform_int_distribution<long> coef(-2, 2);
  for (int s = 0; s < steps; ++s) {
    std::size_t i = pick(rng), j = pick(rng);
    if (i == j) continue;
    Element c = Element::integer(r, coef(rng));
    for (std::size_t k = 0; k < n; ++k) a(i, k) = a(i, k) + c * a(j, k);
  }
  return a;
}

/// A A^-1 conjugate of a 0/1 diagonal matrix; rank given.
inline ElemMatrix random_idempotent(std::mt19937_64& rng, const RingPtr& r, std::size_t n, std::size_t rank) {
  ElemMatrix a = random_unimodular(rng, r, n);
  ElemMatrix d = zero_matrix(r, n, n);
  for (std::size_t i = 0; i < rank; ++i) d(i, i) = Element::one(r);
  return mat_mul(a, mat_mul(d, *inverse(a, r), r), r);
}

/// Theta: S (x)_R S -> prod_G S checked for bijectivity by enumerating S (x) S
/// over a finite base. Theta is R-linear between modules of the same finite
/// size, so a trivial kernel is enough.
inline bool theta_bijective_by_enumeration(const Extension& ext) {
  const auto& g = *ext.group();
  auto base = ext.base()->enumerate();
  const std::size_t d = ext.rank();
  std::vector<Element> scalars;
  for (const auto& v : *base) scalars.emplace_back(ext.base(), v);
  // products[a][i*d+j] = b_i * a(b_j)
  std::vector<std::vector<Element>> products(g.order());
  for (std::size_t a = 0; a < g.order(); ++a)
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) products[a].push_back(ext.basis()[i] * ext.apply(a, ext.basis()[j]));
  std::vector<std::size_t> idx(d * d, 0);
  for (;;) {
    std::size_t k = 0;
    while (k < idx.size() && ++idx[k] == scalars.size()) idx[k++] = 0;
    if (k == idx.size()) return true;
    bool zero = true;
    for (std::size_t a = 0; a < g.order() && zero; ++a) {
      Element s = Element::zero(ext.ring());
      for (std::size_t t = 0; t < idx.size(); ++t)
        if (idx[t]) s = s + ext.lift(scalars[idx[t]]) * products[a][t];
      zero = s.is_zero();
    }
    if (zero) return false;
  }
}

/// phi(e_b) = sum_c eps_c e_{b h_c^-1}: on the c-th idempotent component of R the
/// map translates by h_c. Equivariant for abelian G.
inline ElemMatrix componentwise_translation(const Extension& triv, const std::vector<std::size_t>& h) {
  const RingPtr& r = triv.base();
  const auto& g = *triv.group();
  auto pr = std::dynamic_pointer_cast<const ProductRing>(r);
  const std::size_t n = g.order();
  ElemMatrix nat = zero_matrix(r, n, n);
  for (std::size_t c = 0; c < h.size(); ++c) {
    Element eps(r, pr->idempotent(c));
    for (std::size_t b = 0; b < n; ++b) {
      std::size_t target = g.mul(b, g.inv(h[c]));
      nat(target, b) = nat(target, b) + eps;
    }
  }
  // natural (idempotent) coordinates -> declared coordinates
  return mat_mul(triv.basis_inverse(), mat_mul(nat, triv.basis_matrix(), r), r);
}

/// All extensions x -> -b - x of R[x]/(x^2 + b x + c) plus the trivial action.
inline std::vector<Extension> quadratic_extensions(const std::string& base) {
  RingPtr r = parse_ring(base);
  std::vector<Extension> out;
  const auto elems = *r->enumerate();
  for (const auto& bv : elems)
    for (const auto& cv : elems) {
      Element b(r, bv), c(r, cv);
      std::string poly = "x^2 + (" + b.str() + ")*x + (" + c.str() + ")";
      RingPtr s = parse_ring(base + "[x]/(" + poly + ")");
      Element x = *detail::named_element(s, "x");
      for (bool trivial : {false, true}) {
        GeneratorImages im{{"x", trivial ? x : -x - coerce(b, s)}};
        out.emplace_back(r, s, cyclic_group(2), std::vector<GeneratorImages>{im}, std::vector<Element>{});
      }
    }
  return out;
}

}  // namespace galois::testing
