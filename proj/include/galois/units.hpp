#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "galois/ring_parse.hpp"
#include "galois/smith.hpp"

namespace galois {

/// A finitely generated abelian group of units: generators g_i with orders
/// (0 = infinite) and optional extra relations (columns of exponent vectors).
struct UnitGroupPresentation {
  RingPtr ring;
  std::vector<Element> generators;
  std::vector<Integer> orders;
  Matrix<Integer> relations;  // k x r, may have r = 0
  /// Degrees of the generators in a graded ring (all 0 otherwise).
  std::vector<long> degrees;

  std::size_t rank() const { return generators.size(); }

  /// Columns ord_i e_i plus the extra relations.
  Matrix<Integer> relation_lattice() const {
    const std::size_t k = rank();
    std::vector<std::vector<Integer>> cols;
    for (std::size_t i = 0; i < k; ++i)
      if (orders[i] != 0) {
        std::vector<Integer> c(k, 0);
        c[i] = orders[i];
        cols.push_back(std::move(c));
      }
    for (std::size_t j = 0; j < relations.cols(); ++j) cols.push_back(relations.column(j));
    return Matrix<Integer>::from_columns(cols, k, 0);
  }

  Element evaluate(const std::vector<Integer>& exps) const {
    Element out = Element::one(ring);
    for (std::size_t i = 0; i < rank(); ++i) {
      if (exps[i] == 0) continue;
      if (!exps[i].fits_slong_p()) throw Error(ErrorCode::ResourceBound, "exponent too large");
      out = out * generators[i].pow(exps[i].get_si());
    }
    return out;
  }
};

inline std::string describe(const UnitGroupPresentation& p) {
  std::string s;
  for (std::size_t i = 0; i < p.rank(); ++i) {
    if (i) s += " x ";
    s += "<" + p.generators[i].str() + ">";
    if (p.orders[i] != 0) s += "(order " + p.orders[i].get_str() + ")";
  }
  return s.empty() ? "1" : s;
}

/// Checks that generators are units of the declared orders and that
/// declared degrees match homogeneous degrees.
inline void validate(const UnitGroupPresentation& p) {
  if (p.orders.size() != p.rank() || p.degrees.size() != p.rank())
    throw Error(ErrorCode::ShapeMismatch, "unit presentation sizes");
  if (p.relations.cols() > 0 && p.relations.rows() != p.rank())
    throw Error(ErrorCode::ShapeMismatch, "unit relations");
  for (std::size_t i = 0; i < p.rank(); ++i) {
    const Element& g = p.generators[i];
    if (!same_ring(g.ring(), p.ring)) throw Error(ErrorCode::DescriptorMismatch, "unit generator ring");
    if (!is_unit(g).is_unit()) throw Error(ErrorCode::NotAUnit, g.str());
    if (p.orders[i] != 0) {
      if (!p.orders[i].fits_slong_p()) throw Error(ErrorCode::ResourceBound, "order");
      long o = p.orders[i].get_si();
      if (!g.pow(o).is_one()) throw Error(ErrorCode::MalformedElement, g.str() + " has no order " + std::to_string(o));
      for (long d = 1; d < o; ++d)
        if (o % d == 0 && g.pow(d).is_one())
          throw Error(ErrorCode::MalformedElement, g.str() + " has order dividing " + std::to_string(d));
    }
    if (p.ring->graded()) {
      auto d = homogeneous_degree(g);
      if (!d || *d != p.degrees[i])
        throw Error(ErrorCode::MalformedElement, g.str() + " is not homogeneous of degree " + std::to_string(p.degrees[i]));
    }
  }
  for (std::size_t j = 0; j < p.relations.cols(); ++j)
    if (!p.evaluate(p.relations.column(j)).is_one())
      throw Error(ErrorCode::MalformedElement, "declared unit relation does not hold");
}

namespace detail {

inline UnitGroupPresentation make_presentation(const RingPtr& r, std::vector<Element> gens,
                                               std::vector<Integer> orders) {
  UnitGroupPresentation p;
  p.ring = r;
  p.generators = std::move(gens);
  p.orders = std::move(orders);
  p.degrees.assign(p.generators.size(), 0);
  for (std::size_t i = 0; i < p.generators.size(); ++i)
    if (r->graded())
      if (auto d = homogeneous_degree(p.generators[i])) p.degrees[i] = *d;
  p.relations = Matrix<Integer>(p.generators.size(), 0, 0);
  return p;
}

inline long multiplicative_order(const Element& g, long bound) {
  Element x = g;
  for (long k = 1; k <= bound; ++k) {
    if (x.is_one()) return k;
    x = x * g;
  }
  return 0;
}

/// Unit group of a finite ring by exhaustive search: greedy generators plus
/// the full relation lattice among them.
inline UnitGroupPresentation finite_unit_group(const RingPtr& r) {
  auto all = r->enumerate();
  std::vector<Element> units;
  for (auto& v : *all) {
    Element e(r, v);
    if (is_unit(e).is_unit()) units.push_back(e);
  }
  const long n = static_cast<long>(units.size());
  if (n > 4096) throw Error(ErrorCode::ResourceBound, "unit group of " + r->key() + " too large");
  std::vector<Element> subgroup{Element::one(r)};
  std::vector<Element> gens;
  std::vector<Integer> orders;
  auto contains = [&](const Element& e) { return std::find(subgroup.begin(), subgroup.end(), e) != subgroup.end(); };
  while (static_cast<long>(subgroup.size()) < n) {
    const Element* best = nullptr;
    long best_order = 0;
    for (const auto& u : units) {
      if (contains(u)) continue;
      long o = multiplicative_order(u, n);
      if (o > best_order) {
        best_order = o;
        best = &u;
      }
    }
    gens.push_back(*best);
    orders.push_back(best_order);
    std::vector<Element> grown;
    for (const auto& s : subgroup) {
      Element x = s;
      for (long k = 0; k < best_order; ++k) {
        if (std::find(grown.begin(), grown.end(), x) == grown.end()) grown.push_back(x);
        x = x * *best;
      }
    }
    subgroup = std::move(grown);
  }
  auto p = make_presentation(r, gens, orders);
  // relations among the generators beyond their orders
  std::vector<std::vector<Integer>> rels;
  std::vector<Integer> idx(gens.size(), 0);
  for (;;) {
    std::size_t k = 0;
    while (k < idx.size() && ++idx[k] == orders[k]) idx[k++] = 0;
    if (k == idx.size()) break;
    if (p.evaluate(idx).is_one()) rels.push_back(idx);
  }
  if (!rels.empty()) {
    auto h = hermite_basis(Matrix<Integer>::from_columns(rels, gens.size(), 0));
    p.relations = h.basis;
  }
  return p;
}

}  // namespace detail

/// Unit group presentations derived without user input: Z[1/n] (sign and the
/// inverted primes), finite rings (exhaustive), Laurent rings over such bases
/// (base units and the variable) and products. Quotient towers need a
/// declared presentation.
inline std::optional<UnitGroupPresentation> standard_units(const RingPtr& r) {
  if (auto s = std::dynamic_pointer_cast<const ScalarRing>(r)) {
    switch (s->scalar_kind()) {
      case ScalarKind::Rationals: return std::nullopt;
      case ScalarKind::Integers:
      case ScalarKind::Localized: {
        std::vector<Element> gens{Element::integer(r, -1)};
        std::vector<Integer> orders{2};
        for (const auto& p : s->inverted_primes()) {
          gens.push_back(Element::integer(r, p));
          orders.push_back(0);
        }
        return detail::make_presentation(r, gens, orders);
      }
      case ScalarKind::PrimeField:
      case ScalarKind::Residue: return detail::finite_unit_group(r);
    }
  }
  if (auto l = std::dynamic_pointer_cast<const LaurentRing>(r)) {
    auto b = standard_units(l->base());
    if (!b || !l->base()->is_domain()) return std::nullopt;
    std::vector<Element> gens;
    for (const auto& g : b->generators) gens.push_back(coerce(g, r));
    gens.push_back(Element(r, l->monomial(1, l->base()->one())));
    auto orders = b->orders;
    orders.push_back(0);
    auto p = detail::make_presentation(r, gens, orders);
    if (b->relations.cols() > 0) {
      p.relations = Matrix<Integer>(gens.size(), b->relations.cols(), 0);
      for (std::size_t i = 0; i < b->relations.rows(); ++i)
        for (std::size_t j = 0; j < b->relations.cols(); ++j) p.relations(i, j) = b->relations(i, j);
    }
    return p;
  }
  if (r->cardinality()) return detail::finite_unit_group(r);
  if (auto pr = std::dynamic_pointer_cast<const ProductRing>(r)) {
    std::vector<Element> gens;
    std::vector<Integer> orders;
    std::vector<std::vector<Integer>> rels;
    std::size_t offset = 0;
    std::vector<std::pair<std::size_t, UnitGroupPresentation>> parts;
    for (std::size_t f = 0; f < pr->size(); ++f) {
      auto b = standard_units(pr->factors()[f]);
      if (!b) return std::nullopt;
      parts.emplace_back(offset, *b);
      offset += b->rank();
    }
    for (std::size_t f = 0; f < parts.size(); ++f) {
      const auto& b = parts[f].second;
      for (std::size_t i = 0; i < b.rank(); ++i) {
        std::vector<Value> t = r->one().vec();
        t[f] = b.generators[i].value();
        gens.emplace_back(r, Value(std::move(t)));
        orders.push_back(b.orders[i]);
      }
      for (std::size_t j = 0; j < b.relations.cols(); ++j) {
        std::vector<Integer> c(offset, 0);
        for (std::size_t i = 0; i < b.rank(); ++i) c[parts[f].first + i] = b.relations(i, j);
        rels.push_back(std::move(c));
      }
    }
    auto p = detail::make_presentation(r, gens, orders);
    if (!rels.empty()) p.relations = Matrix<Integer>::from_columns(rels, offset, 0);
    return p;
  }
  return std::nullopt;
}

namespace detail {

inline std::optional<std::vector<Integer>> scalar_log(const UnitGroupPresentation& p, const Rational& q) {
  // the standard Z[1/n] presentation: -1 then inverted primes
  std::vector<Integer> out(p.rank(), 0);
  if (q == 0) return std::nullopt;
  Integer num = q.get_num(), den = q.get_den();
  if (num < 0) {
    out[0] = 1;
    num = -num;
  }
  for (std::size_t i = 1; i < p.rank(); ++i) {
    Integer pr = p.generators[i].value().scalar().get_num();
    while (num % pr == 0) {
      num /= pr;
      ++out[i];
    }
    while (den % pr == 0) {
      den /= pr;
      --out[i];
    }
  }
  if (num != 1 || den != 1) return std::nullopt;
  return out;
}

inline bool is_standard_scalar(const UnitGroupPresentation& p) {
  auto s = std::dynamic_pointer_cast<const ScalarRing>(p.ring);
  if (!s || s->finite() || p.rank() == 0) return false;
  if (p.generators[0] != Element::integer(p.ring, -1)) return false;
  for (std::size_t i = 1; i < p.rank(); ++i) {
    const Rational& g = p.generators[i].value().scalar();
    if (g.get_den() != 1 || !is_probable_prime(g.get_num())) return false;
  }
  return true;
}

}  // namespace detail

/// Exponent vector a with u = prod g_i^a_i, found by structure where the
/// presentation allows it and by a bounded search over exponents otherwise
/// (|a_i| <= bound for infinite-order generators).
inline std::optional<std::vector<Integer>> discrete_log(const UnitGroupPresentation& p, const Element& u,
                                                        long bound = 8) {
  if (!same_ring(u.ring(), p.ring)) throw Error(ErrorCode::DescriptorMismatch, "discrete_log");
  if (detail::is_standard_scalar(p)) return detail::scalar_log(p, u.value().scalar());
  if (auto l = std::dynamic_pointer_cast<const LaurentRing>(p.ring)) {
    // base generators followed by the variable: peel off y^k
    const auto& rep = u.value().laurent();
    const std::size_t k = p.rank();
    if (rep.coeffs.size() == 1 && k >= 1 && p.generators[k - 1] == Element(p.ring, l->monomial(1, l->base()->one()))) {
      bool base_gens = true;
      UnitGroupPresentation bp;
      bp.ring = l->base();
      for (std::size_t i = 0; i + 1 < k; ++i) {
        const auto& g = p.generators[i].value().laurent();
        if (g.low != 0 || g.coeffs.size() != 1) {
          base_gens = false;
          break;
        }
        bp.generators.emplace_back(l->base(), g.coeffs[0]);
        bp.orders.push_back(p.orders[i]);
        bp.degrees.push_back(0);
      }
      if (base_gens) {
        bp.relations = Matrix<Integer>(bp.rank(), 0, 0);
        auto b = discrete_log(bp, Element(l->base(), rep.coeffs[0]), bound);
        if (b) {
          b->push_back(rep.low);
          if (p.evaluate(*b) == u) return b;
        }
      }
    }
  }
  // bounded search
  const std::size_t k = p.rank();
  std::vector<long> lo(k), hi(k);
  double size = 1;
  for (std::size_t i = 0; i < k; ++i) {
    if (p.orders[i] != 0) {
      lo[i] = 0;
      hi[i] = p.orders[i].get_si() - 1;
    } else {
      lo[i] = -bound;
      hi[i] = bound;
    }
    size *= static_cast<double>(hi[i] - lo[i] + 1);
  }
  if (size > 2e6) throw Error(ErrorCode::ResourceBound, "discrete log search space");
  std::vector<long> a(lo);
  for (;;) {
    std::vector<Integer> exps(a.begin(), a.end());
    if (p.evaluate(exps) == u) return exps;
    std::size_t i = 0;
    while (i < k && ++a[i] > hi[i]) {
      a[i] = lo[i];
      ++i;
    }
    if (i == k) break;
  }
  return std::nullopt;
}

/// Unit test that falls back on a declared presentation when the ring's own
/// procedure is inconclusive.
inline UnitResult is_unit(const Element& e, const UnitGroupPresentation* units) {
  auto r = is_unit(e);
  if (r.status != UnitStatus::Undecided || !units) return r;
  auto a = discrete_log(*units, e);
  if (!a) return r;
  for (auto& x : *a) x = -x;
  r.status = UnitStatus::Unit;
  r.inverse = units->evaluate(*a);
  return r;
}

}  // namespace galois
