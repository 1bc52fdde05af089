#pragma once

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "galois/linalg.hpp"
#include "galois/smith.hpp"

namespace galois {

/// A finite group given by its Cayley table, with a chosen generating set.
/// Element 0 is the identity.
class FiniteGroup {
 public:
  static constexpr std::size_t kMaxOrder = 64;

  FiniteGroup(std::string label, std::vector<std::string> names, std::vector<std::vector<std::size_t>> table,
              std::vector<std::size_t> generators)
      : label_(std::move(label)), names_(std::move(names)), table_(std::move(table)), gens_(std::move(generators)) {
    const std::size_t n = names_.size();
    if (n == 0 || n > kMaxOrder) throw Error(ErrorCode::ResourceBound, "group order must be in 1.." + std::to_string(kMaxOrder));
    if (table_.size() != n) throw Error(ErrorCode::ShapeMismatch, "Cayley table rows");
    for (const auto& row : table_) {
      if (row.size() != n) throw Error(ErrorCode::ShapeMismatch, "Cayley table columns");
      for (auto x : row)
        if (x >= n) throw Error(ErrorCode::ShapeMismatch, "Cayley table entry");
    }
    for (std::size_t a = 0; a < n; ++a)
      if (table_[0][a] != a || table_[a][0] != a)
        throw Error(ErrorCode::RelationViolated, "element 0 is not the identity");
    inv_.assign(n, n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        if (table_[a][b] == 0) inv_[a] = b;
    for (std::size_t a = 0; a < n; ++a) {
      if (inv_[a] == n || table_[inv_[a]][a] != 0) throw Error(ErrorCode::RelationViolated, "missing inverse of " + names_[a]);
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c)
          if (table_[table_[a][b]][c] != table_[a][table_[b][c]])
            throw Error(ErrorCode::RelationViolated, "table is not associative");
    }
    abelian_ = true;
    for (std::size_t a = 0; a < n && abelian_; ++a)
      for (std::size_t b = 0; b < n; ++b)
        if (table_[a][b] != table_[b][a]) {
          abelian_ = false;
          break;
        }
    // every element as a word in the generators (breadth first)
    words_.assign(n, {});
    std::vector<bool> seen(n, false);
    seen[0] = true;
    std::deque<std::size_t> queue{0};
    while (!queue.empty()) {
      std::size_t a = queue.front();
      queue.pop_front();
      for (std::size_t gi = 0; gi < gens_.size(); ++gi) {
        std::size_t b = table_[a][gens_[gi]];
        if (seen[b]) continue;
        seen[b] = true;
        words_[b] = words_[a];
        words_[b].push_back(gi);
        queue.push_back(b);
      }
    }
    for (std::size_t a = 0; a < n; ++a)
      if (!seen[a]) throw Error(ErrorCode::RelationViolated, "generators do not generate " + names_[a]);
  }

  const std::string& label() const { return label_; }
  std::size_t order() const { return names_.size(); }
  std::size_t identity() const { return 0; }
  std::size_t mul(std::size_t a, std::size_t b) const { return table_[a][b]; }
  std::size_t inv(std::size_t a) const { return inv_[a]; }
  std::size_t pow(std::size_t a, long k) const {
    if (k < 0) return pow(inv(a), -k);
    std::size_t r = 0;
    for (long i = 0; i < k; ++i) r = mul(r, a);
    return r;
  }
  const std::string& name(std::size_t a) const { return names_[a]; }
  std::optional<std::size_t> find(const std::string& name) const {
    for (std::size_t a = 0; a < names_.size(); ++a)
      if (names_[a] == name) return a;
    return std::nullopt;
  }
  const std::vector<std::size_t>& generators() const { return gens_; }
  const std::vector<std::vector<std::size_t>>& table() const { return table_; }
  /// Generator indices (into generators()) whose product, left to right, is a.
  const std::vector<std::size_t>& word(std::size_t a) const { return words_[a]; }
  bool is_abelian() const { return abelian_; }

  long element_order(std::size_t a) const {
    std::size_t x = a;
    long k = 1;
    while (x != 0) {
      x = mul(x, a);
      ++k;
    }
    return k;
  }
  long exponent() const {
    long e = 1;
    for (std::size_t a = 0; a < order(); ++a) e = std::lcm(e, element_order(a));
    return e;
  }
  std::optional<std::size_t> cyclic_generator() const {
    for (std::size_t a = 0; a < order(); ++a)
      if (element_order(a) == static_cast<long>(order())) return a;
    return std::nullopt;
  }

 private:
  std::string label_;
  std::vector<std::string> names_;
  std::vector<std::vector<std::size_t>> table_;
  std::vector<std::size_t> gens_;
  std::vector<std::size_t> inv_;
  std::vector<std::vector<std::size_t>> words_;
  bool abelian_ = true;
};

using GroupPtr = std::shared_ptr<const FiniteGroup>;

inline GroupPtr cyclic_group(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::ParseError, "cyclic(0)");
  std::vector<std::string> names;
  std::vector<std::vector<std::size_t>> table(n, std::vector<std::size_t>(n));
  for (std::size_t k = 0; k < n; ++k) {
    names.push_back(k == 0 ? "e" : k == 1 ? "g" : "g^" + std::to_string(k));
    for (std::size_t l = 0; l < n; ++l) table[k][l] = (k + l) % n;
  }
  std::vector<std::size_t> gens;
  if (n > 1) gens.push_back(1);
  return std::make_shared<FiniteGroup>("cyclic(" + std::to_string(n) + ")", names, table, gens);
}

/// Direct product; elements are tuples "(a,b)", generators are those of the
/// factors in order.
inline GroupPtr product_group(const std::vector<GroupPtr>& factors) {
  std::size_t n = 1;
  for (const auto& f : factors) n *= f->order();
  if (n > FiniteGroup::kMaxOrder) throw Error(ErrorCode::ResourceBound, "product group too large");
  auto decode = [&](std::size_t x) {
    std::vector<std::size_t> c(factors.size());
    for (std::size_t i = factors.size(); i-- > 0;) {
      c[i] = x % factors[i]->order();
      x /= factors[i]->order();
    }
    return c;
  };
  auto encode = [&](const std::vector<std::size_t>& c) {
    std::size_t x = 0;
    for (std::size_t i = 0; i < factors.size(); ++i) x = x * factors[i]->order() + c[i];
    return x;
  };
  std::vector<std::string> names(n);
  std::vector<std::vector<std::size_t>> table(n, std::vector<std::size_t>(n));
  for (std::size_t x = 0; x < n; ++x) {
    auto cx = decode(x);
    std::string s = "(";
    for (std::size_t i = 0; i < cx.size(); ++i) s += (i ? "," : "") + factors[i]->name(cx[i]);
    names[x] = s + ")";
    for (std::size_t y = 0; y < n; ++y) {
      auto cy = decode(y);
      std::vector<std::size_t> cz(cx.size());
      for (std::size_t i = 0; i < cx.size(); ++i) cz[i] = factors[i]->mul(cx[i], cy[i]);
      table[x][y] = encode(cz);
    }
  }
  std::vector<std::size_t> gens;
  std::string label = "product(";
  for (std::size_t i = 0; i < factors.size(); ++i) {
    label += (i ? "," : "") + factors[i]->label();
    for (auto g : factors[i]->generators()) {
      std::vector<std::size_t> c(factors.size(), 0);
      c[i] = g;
      gens.push_back(encode(c));
    }
  }
  return std::make_shared<FiniteGroup>(label + ")", names, table, gens);
}

/// (Z/m)^x with elements named by their residues.
inline GroupPtr unit_group_mod(std::size_t m) {
  if (m < 2) throw Error(ErrorCode::ParseError, "units(m) needs m >= 2");
  std::vector<std::size_t> res{1};
  for (std::size_t a = 2; a < m; ++a)
    if (std::gcd(a, m) == 1) res.push_back(a);
  if (m == 2) res = {1};
  const std::size_t n = res.size();
  if (n > FiniteGroup::kMaxOrder) throw Error(ErrorCode::ResourceBound, "units(m) too large");
  std::map<std::size_t, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) index[res[i]] = i;
  std::vector<std::string> names;
  std::vector<std::vector<std::size_t>> table(n, std::vector<std::size_t>(n));
  for (std::size_t i = 0; i < n; ++i) {
    names.push_back(std::to_string(res[i]));
    for (std::size_t j = 0; j < n; ++j) table[i][j] = index[(res[i] * res[j]) % m];
  }
  // greedy generators: repeatedly add the element of largest order outside the span
  std::vector<std::size_t> gens;
  std::vector<bool> span(n, false);
  span[0] = true;
  auto order_of = [&](std::size_t a) {
    std::size_t x = a, k = 1;
    while (x != 0) {
      x = table[x][a];
      ++k;
    }
    return k;
  };
  for (;;) {
    std::optional<std::size_t> best;
    for (std::size_t a = 0; a < n; ++a)
      if (!span[a] && (!best || order_of(a) > order_of(*best))) best = a;
    if (!best) break;
    gens.push_back(*best);
    bool grew = true;
    while (grew) {
      grew = false;
      for (std::size_t a = 0; a < n; ++a)
        if (span[a] && !span[table[a][*best]]) {
          span[table[a][*best]] = true;
          grew = true;
        }
    }
  }
  return std::make_shared<FiniteGroup>("units(" + std::to_string(m) + ")", names, table, gens);
}

namespace detail {

inline std::vector<std::string> split_top_level(const std::string& s) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(cur);
      cur.clear();
      continue;
    }
    if (c != ' ') cur += c;
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

}  // namespace detail

/// Parses "trivial", "cyclic(n)", "units(m)" or "product(G1,G2,...)".
inline GroupPtr parse_group(const std::string& text) {
  std::string s;
  for (char c : text)
    if (c != ' ') s += c;
  auto arg = [&](const std::string& head) -> std::optional<std::string> {
    if (s.rfind(head + "(", 0) != 0 || s.back() != ')') return std::nullopt;
    return s.substr(head.size() + 1, s.size() - head.size() - 2);
  };
  auto number = [&](const std::string& a) {
    if (a.empty() || a.find_first_not_of("0123456789") != std::string::npos)
      throw Error(ErrorCode::ParseError, "bad group argument '" + a + "'");
    return static_cast<std::size_t>(std::stoul(a));
  };
  if (s == "trivial") return cyclic_group(1);
  if (auto a = arg("cyclic")) return cyclic_group(number(*a));
  if (auto a = arg("units")) return unit_group_mod(number(*a));
  if (auto a = arg("product")) {
    std::vector<GroupPtr> fs;
    for (const auto& part : detail::split_top_level(*a)) fs.push_back(parse_group(part));
    if (fs.empty()) throw Error(ErrorCode::ParseError, "empty product");
    return product_group(fs);
  }
  throw Error(ErrorCode::ParseError, "unknown group '" + text + "'");
}

// ---------------------------------------------------------------------------
// Abelian structure

/// Invariant-factor decomposition of an abelian group: basis elements h_i of
/// orders d_i (all > 1) and, for every element, its coordinates.
struct AbelianDecomposition {
  std::vector<std::size_t> basis;
  std::vector<long> orders;
  std::vector<std::vector<long>> coords;  // coords[a][i] in [0, d_i)
};

inline AbelianDecomposition abelian_decomposition(const FiniteGroup& g) {
  if (!g.is_abelian()) throw Error(ErrorCode::PreconditionFailed, g.label() + " is not abelian");
  const auto& gens = g.generators();
  const std::size_t k = gens.size();
  std::vector<long> ord(k);
  for (std::size_t i = 0; i < k; ++i) ord[i] = g.element_order(gens[i]);
  // exponent vector of every element, and the relation lattice among generators
  std::vector<std::vector<long>> exps(g.order());
  std::vector<bool> seen(g.order(), false);
  std::vector<std::vector<Integer>> rels;
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<Integer> c(k, 0);
    c[i] = ord[i];
    rels.push_back(c);
  }
  std::vector<long> a(k, 0);
  for (;;) {
    std::size_t x = 0;
    for (std::size_t i = 0; i < k; ++i) x = g.mul(x, g.pow(gens[i], a[i]));
    if (!seen[x]) {
      seen[x] = true;
      exps[x] = a;
    } else {
      std::vector<Integer> rel(k);
      for (std::size_t i = 0; i < k; ++i) rel[i] = a[i] - exps[x][i];
      rels.push_back(rel);
    }
    std::size_t i = 0;
    while (i < k && ++a[i] == ord[i]) a[i++] = 0;
    if (i == k) break;
  }
  if (k == 0) exps[0] = {};
  auto lattice = Matrix<Integer>::from_columns(rels, k, 0);
  AbelianDecomposition out;
  if (k == 0) {
    out.coords.assign(1, {});
    return out;
  }
  auto sf = smith_normal_form(lattice);
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < k; ++i) {
    Integer d = i < sf.rank ? sf.D(i, i) : Integer(0);
    if (d == 0) throw Error(ErrorCode::InternalContradiction, "finite group with free part");
    if (d != 1) keep.push_back(i);
  }
  for (auto i : keep) {
    std::size_t h = 0;
    for (std::size_t j = 0; j < k; ++j) {
      Integer e = mod_floor(sf.Uinv(j, i), Integer(ord[j]));
      h = g.mul(h, g.pow(gens[j], e.get_si()));
    }
    out.basis.push_back(h);
    out.orders.push_back(sf.D(i, i).get_si());
  }
  out.coords.assign(g.order(), {});
  for (std::size_t x = 0; x < g.order(); ++x)
    for (std::size_t t = 0; t < keep.size(); ++t) {
      Integer c = 0;
      for (std::size_t j = 0; j < k; ++j) c += sf.U(keep[t], j) * exps[x][j];
      out.coords[x].push_back(mod_floor(c, Integer(out.orders[t])).get_si());
    }
  // consistency: the coordinates reproduce the element
  for (std::size_t x = 0; x < g.order(); ++x) {
    std::size_t y = 0;
    for (std::size_t t = 0; t < keep.size(); ++t) y = g.mul(y, g.pow(out.basis[t], out.coords[x][t]));
    if (y != x) throw Error(ErrorCode::InternalContradiction, "abelian decomposition");
  }
  return out;
}

inline std::vector<long> invariant_factors(const FiniteGroup& g) { return abelian_decomposition(g).orders; }

inline std::string describe_invariants(const std::vector<long>& d) {
  if (d.empty()) return "1";
  std::string s;
  for (std::size_t i = 0; i < d.size(); ++i) s += (i ? " x C" : "C") + std::to_string(d[i]);
  return s;
}

// ---------------------------------------------------------------------------
// Characters and group rings

/// A homomorphism G -> <zeta> with explicit values.
struct Character {
  GroupPtr group;
  std::vector<Element> values;
  std::vector<long> exponents;  // chi(a) = zeta^exponents[a]
};

/// Multiplicative order of z, up to `bound` (0 if not found).
inline long root_order(const Element& z, long bound) {
  Element x = z;
  for (long k = 1; k <= bound; ++k) {
    if (x.is_one()) return k;
    x = x * z;
  }
  return 0;
}

/// All characters of an abelian group with values in powers of zeta, which
/// must have order exactly the exponent of G.
inline std::vector<Character> all_characters(const GroupPtr& g, const Element& zeta) {
  const long e = g->exponent();
  if (root_order(zeta, e) != e)
    throw Error(ErrorCode::NoRootOfUnity, zeta.str() + " is not a primitive " + std::to_string(e) + "-th root of unity");
  auto dec = abelian_decomposition(*g);
  std::vector<Character> out;
  std::vector<long> c(dec.orders.size(), 0);
  for (;;) {
    Character chi;
    chi.group = g;
    for (std::size_t a = 0; a < g->order(); ++a) {
      long x = 0;
      for (std::size_t i = 0; i < c.size(); ++i) x += c[i] * dec.coords[a][i] * (e / dec.orders[i]);
      chi.exponents.push_back(x % e);
      chi.values.push_back(zeta.pow(x % e));
    }
    out.push_back(std::move(chi));
    std::size_t i = 0;
    while (i < c.size() && ++c[i] == dec.orders[i]) c[i++] = 0;
    if (i == c.size()) break;
  }
  return out;
}

inline bool is_multiplicative(const Character& chi) {
  const auto& g = *chi.group;
  for (std::size_t a = 0; a < g.order(); ++a)
    for (std::size_t b = 0; b < g.order(); ++b)
      if (chi.values[g.mul(a, b)] != chi.values[a] * chi.values[b]) return false;
  return true;
}

/// Sum over G of coefficient * group element; coefficients indexed by element.
struct GroupRingElement {
  GroupPtr group;
  RingPtr ring;
  std::vector<Element> coeffs;

  static GroupRingElement zero(const GroupPtr& g, const RingPtr& r) {
    return {g, r, std::vector<Element>(g->order(), Element::zero(r))};
  }
  static GroupRingElement basis(const GroupPtr& g, const RingPtr& r, std::size_t a, const Element& s) {
    auto x = zero(g, r);
    x.coeffs[a] = s;
    return x;
  }
  bool operator==(const GroupRingElement& o) const { return coeffs == o.coeffs; }
  GroupRingElement operator+(const GroupRingElement& o) const {
    auto x = *this;
    for (std::size_t a = 0; a < coeffs.size(); ++a) x.coeffs[a] = x.coeffs[a] + o.coeffs[a];
    return x;
  }
  std::string str() const {
    std::string s;
    for (std::size_t a = 0; a < coeffs.size(); ++a) {
      if (coeffs[a].is_zero()) continue;
      if (!s.empty()) s += " + ";
      s += "(" + coeffs[a].str() + ")*" + group->name(a);
    }
    return s.empty() ? "0" : s;
  }
};

using RingAutomorphism = std::function<Element(std::size_t, const Element&)>;

/// (s a)(t b) = (s * a(t)) (ab).
inline GroupRingElement twisted_multiply(const GroupRingElement& x, const GroupRingElement& y,
                                         const RingAutomorphism& act) {
  if (!same_ring(x.ring, y.ring)) throw Error(ErrorCode::DescriptorMismatch, "twisted group ring");
  const auto& g = *x.group;
  auto out = GroupRingElement::zero(x.group, x.ring);
  for (std::size_t a = 0; a < g.order(); ++a) {
    if (x.coeffs[a].is_zero()) continue;
    for (std::size_t b = 0; b < g.order(); ++b) {
      if (y.coeffs[b].is_zero()) continue;
      auto& slot = out.coeffs[g.mul(a, b)];
      slot = slot + x.coeffs[a] * act(a, y.coeffs[b]);
    }
  }
  return out;
}

/// Ordinary group ring product.
inline GroupRingElement group_ring_multiply(const GroupRingElement& x, const GroupRingElement& y) {
  return twisted_multiply(x, y, [](std::size_t, const Element& t) { return t; });
}

/// Function table G -> S sending a group element to its coefficient, so a
/// basis element becomes the Kronecker function at it.
inline std::vector<Element> upsilon(const GroupRingElement& x) { return x.coeffs; }

inline GroupRingElement upsilon_inverse(const GroupPtr& g, const RingPtr& r, const std::vector<Element>& table) {
  if (table.size() != g->order()) throw Error(ErrorCode::ShapeMismatch, "function table");
  return {g, r, table};
}

/// Left translation on the group ring, a * x.
inline GroupRingElement translate(std::size_t a, const GroupRingElement& x) {
  return group_ring_multiply(GroupRingElement::basis(x.group, x.ring, a, Element::one(x.ring)), x);
}

/// Left action on function tables, (a f)(b) = f(a^-1 b).
inline std::vector<Element> act_on_table(const FiniteGroup& g, std::size_t a, const std::vector<Element>& f) {
  std::vector<Element> out(f.size());
  for (std::size_t b = 0; b < f.size(); ++b) out[b] = f[g.mul(g.inv(a), b)];
  return out;
}

/// e_chi = (1/|G|) sum chi(a^-1) a.
inline GroupRingElement character_idempotent(const Character& chi, const RingPtr& r) {
  const auto& g = *chi.group;
  auto n = is_unit(Element::integer(r, static_cast<long>(g.order())));
  if (!n.is_unit()) throw Error(ErrorCode::OrderNotInvertible, "|G| = " + std::to_string(g.order()) + " in " + r->key());
  auto out = GroupRingElement::zero(chi.group, r);
  for (std::size_t a = 0; a < g.order(); ++a) {
    auto v = try_coerce(chi.values[g.inv(a)], r);
    if (!v) throw Error(ErrorCode::NoRootOfUnity, "character values do not lie in " + r->key());
    out.coeffs[a] = *n.inverse * *v;
  }
  return out;
}

inline bool complete_orthogonal_idempotents(const std::vector<GroupRingElement>& es) {
  if (es.empty()) return false;
  auto sum = GroupRingElement::zero(es[0].group, es[0].ring);
  for (std::size_t i = 0; i < es.size(); ++i) {
    if (!(group_ring_multiply(es[i], es[i]) == es[i])) return false;
    for (std::size_t j = i + 1; j < es.size(); ++j)
      if (!(group_ring_multiply(es[i], es[j]) == GroupRingElement::zero(es[0].group, es[0].ring))) return false;
    sum = sum + es[i];
  }
  return sum == GroupRingElement::basis(es[0].group, es[0].ring, 0, Element::one(es[0].ring));
}

}  // namespace galois
