#pragma once

#include <cctype>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "galois/ring.hpp"

namespace galois {

// ---------------------------------------------------------------------------
// Factories

inline RingPtr integers() { return std::make_shared<ScalarRing>(ScalarKind::Integers, 0, std::set<Integer>{}); }
inline RingPtr rationals() { return std::make_shared<ScalarRing>(ScalarKind::Rationals, 0, std::set<Integer>{}); }

inline RingPtr prime_field(const Integer& p) {
  if (!is_probable_prime(p)) throw Error(ErrorCode::UnknownRingConstructor, "GF(" + p.get_str() + "): not prime");
  return std::make_shared<ScalarRing>(ScalarKind::PrimeField, p, std::set<Integer>{});
}

inline RingPtr residue_ring(const Integer& m) {
  if (m < 2) throw Error(ErrorCode::UnknownRingConstructor, "Z/" + m.get_str() + ": modulus must be >= 2");
  return std::make_shared<ScalarRing>(ScalarKind::Residue, m, std::set<Integer>{});
}

/// Z[1/n] for the given primes; an empty set gives Z.
inline RingPtr localization(const std::set<Integer>& primes) {
  for (const auto& p : primes)
    if (!is_probable_prime(p))
      throw Error(ErrorCode::UnknownRingConstructor, "inverted element " + p.get_str() + " is not prime");
  if (primes.empty()) return integers();
  return std::make_shared<ScalarRing>(ScalarKind::Localized, 0, primes);
}

inline RingPtr localization(const RingPtr& base, const std::set<Integer>& primes) {
  auto s = std::dynamic_pointer_cast<const ScalarRing>(base);
  if (!s || (s->scalar_kind() != ScalarKind::Integers && s->scalar_kind() != ScalarKind::Localized))
    throw Error(ErrorCode::UnsupportedBase, "localization is supported over Z only, not " + base->key());
  std::set<Integer> all = s->inverted_primes();
  all.insert(primes.begin(), primes.end());
  return localization(all);
}

inline RingPtr monic_quotient(const RingPtr& base, const std::string& var, std::vector<Value> f,
                              std::optional<long> var_degree = std::nullopt) {
  if (var_degree && *var_degree % 2 != 0) {
    // exterior-type generator: x^2 = -x^2 forces 2x^2 = 0
    auto r = std::make_shared<QuotientRing>(base, var, f, var_degree);
    Value x2 = r->mul(r->monomial(1), r->monomial(1));
    if (!r->is_zero(r->add(x2, x2)))
      throw Error(ErrorCode::UnknownRingConstructor, "odd-degree variable " + var + " needs 2*" + var + "^2 = 0");
    return r;
  }
  return std::make_shared<QuotientRing>(base, var, std::move(f), var_degree);
}

inline RingPtr laurent(const RingPtr& base, const std::string& var, long degree, bool graded) {
  return std::make_shared<LaurentRing>(base, var, degree, graded);
}

inline RingPtr product(std::vector<RingPtr> factors) {
  if (factors.size() == 1) return factors[0];
  return std::make_shared<ProductRing>(std::move(factors));
}

/// R x R x ... x R (k copies).
inline RingPtr power(const RingPtr& r, std::size_t k) { return product(std::vector<RingPtr>(k, r)); }

// ---------------------------------------------------------------------------
// Expression syntax tree, shared by element and polynomial parsing.

struct Expr {
  enum Kind { Num, Var, Add, Sub, Neg, Mul, Div, Pow, Tuple } kind = Num;
  Integer num;
  std::string name;
  long exponent = 0;
  std::vector<Expr> kids;
};

namespace detail {

class ExprParser {
 public:
  explicit ExprParser(std::string_view s) : s_(s) {}

  Expr parse() {
    Expr e = sum();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::MalformedElement,
                msg + " at column " + std::to_string(pos_ + 1) + " in \"" + std::string(s_) + "\"");
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }
  bool eat(char c) {
    if (!peek(c)) return false;
    ++pos_;
    return true;
  }
  bool starts_primary() {
    skip();
    if (pos_ >= s_.size()) return false;
    char c = s_[pos_];
    return std::isalnum(static_cast<unsigned char>(c)) || c == '(' || c == '_';
  }

  Expr sum() {
    Expr e;
    if (eat('-')) {
      e.kind = Expr::Neg;
      e.kids.push_back(term());
    } else {
      eat('+');
      e = term();
    }
    for (;;) {
      Expr::Kind k;
      if (eat('+'))
        k = Expr::Add;
      else if (eat('-'))
        k = Expr::Sub;
      else
        break;
      Expr n;
      n.kind = k;
      n.kids = {std::move(e), term()};
      e = std::move(n);
    }
    return e;
  }

  Expr term() {
    Expr e = factor();
    for (;;) {
      Expr::Kind k;
      if (eat('*'))
        k = Expr::Mul;
      else if (eat('/'))
        k = Expr::Div;
      else if (starts_primary())
        k = Expr::Mul;
      else
        break;
      Expr n;
      n.kind = k;
      n.kids = {std::move(e), factor()};
      e = std::move(n);
    }
    return e;
  }

  Expr factor() {
    if (eat('-')) {
      Expr n;
      n.kind = Expr::Neg;
      n.kids.push_back(factor());
      return n;
    }
    Expr base = primary();
    if (eat('^')) {
      bool paren = eat('(');
      bool negative = eat('-');
      skip();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected exponent");
      long k = std::stol(std::string(s_.substr(start, pos_ - start)));
      if (paren && !eat(')')) fail("expected ')'");
      Expr n;
      n.kind = Expr::Pow;
      n.exponent = negative ? -k : k;
      n.kids.push_back(std::move(base));
      return n;
    }
    return base;
  }

  Expr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      std::vector<Expr> items{sum()};
      while (eat(',')) items.push_back(sum());
      if (!eat(')')) fail("expected ')'");
      if (items.size() == 1) return std::move(items[0]);
      Expr t;
      t.kind = Expr::Tuple;
      t.kids = std::move(items);
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      Expr n;
      n.kind = Expr::Num;
      n.num = Integer(std::string(s_.substr(start, pos_ - start)));
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      Expr n;
      n.kind = Expr::Var;
      n.name = std::string(s_.substr(start, pos_ - start));
      return n;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Expr parse_expr(std::string_view s) { return detail::ExprParser(s).parse(); }

// ---------------------------------------------------------------------------
// Coercion along the natural maps of the constructor tree.

inline std::optional<Element> try_coerce(const Element& e, const RingPtr& target);

namespace detail {

inline std::optional<Value> coerce_value(const RingPtr& from, const Value& v, const RingPtr& to) {
  auto r = try_coerce(Element(from, v), to);
  if (!r) return std::nullopt;
  return r->value();
}

}  // namespace detail

/// Image of e under the canonical map into `target`, if there is one:
/// Z -> Z[1/n] -> Q, Z[1/n] -> Z/m when the denominators are invertible,
/// base -> tower (as constants), diagonal into products, and coefficientwise
/// base change between rings built with the same constructor and variable.
inline std::optional<Element> try_coerce(const Element& e, const RingPtr& target) {
  const RingPtr& src = e.ring();
  if (same_ring(src, target)) return Element(target, e.value());
  if (auto tp = std::dynamic_pointer_cast<const ProductRing>(target)) {
    auto sp = std::dynamic_pointer_cast<const ProductRing>(src);
    std::vector<Value> out;
    for (std::size_t i = 0; i < tp->size(); ++i) {
      std::optional<Value> c;
      if (sp && sp->size() == tp->size())
        c = detail::coerce_value(sp->factors()[i], e.value().vec()[i], tp->factors()[i]);
      else
        c = detail::coerce_value(src, e.value(), tp->factors()[i]);
      if (!c) return std::nullopt;
      out.push_back(*c);
    }
    return Element(target, Value(std::move(out)));
  }
  if (auto tq = std::dynamic_pointer_cast<const QuotientRing>(target)) {
    auto sq = std::dynamic_pointer_cast<const QuotientRing>(src);
    if (sq && sq->var() == tq->var() && sq->degree() == tq->degree()) {
      std::vector<Value> out;
      for (const auto& c : e.value().vec()) {
        auto v = detail::coerce_value(sq->base(), c, tq->base());
        if (!v) return std::nullopt;
        out.push_back(*v);
      }
      return Element(target, tq->normalize(Value(std::move(out))));
    }
    auto c = detail::coerce_value(src, e.value(), tq->base());
    if (!c) return std::nullopt;
    return Element(target, tq->constant(*c));
  }
  if (auto tl = std::dynamic_pointer_cast<const LaurentRing>(target)) {
    auto sl = std::dynamic_pointer_cast<const LaurentRing>(src);
    if (sl && sl->var() == tl->var()) {
      LaurentRep out = e.value().laurent();
      for (auto& c : out.coeffs) {
        auto v = detail::coerce_value(sl->base(), c, tl->base());
        if (!v) return std::nullopt;
        c = *v;
      }
      return Element(target, tl->normalize(Value(std::move(out))));
    }
    auto c = detail::coerce_value(src, e.value(), tl->base());
    if (!c) return std::nullopt;
    return Element(target, tl->constant(*c));
  }
  auto ts = std::dynamic_pointer_cast<const ScalarRing>(target);
  auto ss = std::dynamic_pointer_cast<const ScalarRing>(src);
  if (ts && ss) {
    if (ss->finite() && !(ts->finite() && ss->modulus() % ts->modulus() == 0)) return std::nullopt;
    auto q = ts->from_rational(e.value().scalar());
    if (!q) return std::nullopt;
    return Element(target, Value(*q));
  }
  return std::nullopt;
}

inline Element coerce(const Element& e, const RingPtr& target) {
  auto r = try_coerce(e, target);
  if (!r) throw Error(ErrorCode::DescriptorMismatch, "no natural map " + e.ring()->key() + " -> " + target->key());
  return *r;
}

inline Element from_rational(const RingPtr& r, const Rational& q) {
  auto num = Element::integer(r, q.get_num());
  auto den = is_unit(Element::integer(r, q.get_den()));
  if (!den.is_unit()) throw Error(ErrorCode::NotAUnit, q.get_den().get_str() + " in " + r->key());
  return num * *den.inverse;
}

// ---------------------------------------------------------------------------
// Element evaluation

namespace detail {

/// The element named `name` in ring r (an adjoined variable at any level, or
/// an idempotent e0, e1, ... of a product).
inline std::optional<Element> named_element(const RingPtr& r, const std::string& name) {
  if (auto q = std::dynamic_pointer_cast<const QuotientRing>(r)) {
    if (q->var() == name) return Element(r, q->monomial(1));
    auto b = named_element(q->base(), name);
    if (b) return Element(r, q->constant(b->value()));
    return std::nullopt;
  }
  if (auto l = std::dynamic_pointer_cast<const LaurentRing>(r)) {
    if (l->var() == name) return Element(r, l->monomial(1, l->base()->one()));
    auto b = named_element(l->base(), name);
    if (b) return Element(r, l->constant(b->value()));
    return std::nullopt;
  }
  if (auto p = std::dynamic_pointer_cast<const ProductRing>(r)) {
    if (name.size() > 1 && name[0] == 'e' &&
        name.find_first_not_of("0123456789", 1) == std::string::npos) {
      std::size_t k = std::stoul(name.substr(1));
      if (k < p->size()) return Element(r, p->idempotent(k));
    }
  }
  return std::nullopt;
}

inline Element eval_expr(const Expr& x, const RingPtr& r) {
  switch (x.kind) {
    case Expr::Num: return Element::integer(r, x.num);
    case Expr::Var: {
      auto e = named_element(r, x.name);
      if (!e) throw Error(ErrorCode::MalformedElement, "unknown name '" + x.name + "' in " + r->key());
      return *e;
    }
    case Expr::Add: return eval_expr(x.kids[0], r) + eval_expr(x.kids[1], r);
    case Expr::Sub: return eval_expr(x.kids[0], r) - eval_expr(x.kids[1], r);
    case Expr::Neg: return -eval_expr(x.kids[0], r);
    case Expr::Mul: return eval_expr(x.kids[0], r) * eval_expr(x.kids[1], r);
    case Expr::Div: {
      auto d = is_unit(eval_expr(x.kids[1], r));
      if (!d.is_unit())
        throw Error(ErrorCode::MalformedElement, "division by a non-unit in " + r->key());
      return eval_expr(x.kids[0], r) * *d.inverse;
    }
    case Expr::Pow: return eval_expr(x.kids[0], r).pow(x.exponent);
    case Expr::Tuple: {
      auto p = std::dynamic_pointer_cast<const ProductRing>(r);
      if (!p || p->size() != x.kids.size())
        throw Error(ErrorCode::MalformedElement, "tuple of length " + std::to_string(x.kids.size()) +
                                                     " does not fit " + r->key());
      std::vector<Value> out;
      for (std::size_t i = 0; i < x.kids.size(); ++i)
        out.push_back(eval_expr(x.kids[i], p->factors()[i]).value());
      return Element(r, Value(std::move(out)));
    }
  }
  throw Error(ErrorCode::MalformedElement, "bad expression");
}

/// Polynomial in `var` with coefficients in `base`, lowest degree first.
class PolyEval {
 public:
  PolyEval(RingPtr base, std::string var) : base_(std::move(base)), var_(std::move(var)) {}

  using Poly = std::vector<Element>;

  Poly eval(const Expr& x) const {
    switch (x.kind) {
      case Expr::Num: return trim({Element::integer(base_, x.num)});
      case Expr::Var:
        if (x.name == var_) return {zero(), one()};
        return trim({eval_expr(x, base_)});
      case Expr::Add: return add(eval(x.kids[0]), eval(x.kids[1]));
      case Expr::Sub: return add(eval(x.kids[0]), neg(eval(x.kids[1])));
      case Expr::Neg: return neg(eval(x.kids[0]));
      case Expr::Mul: return mul(eval(x.kids[0]), eval(x.kids[1]));
      case Expr::Div: {
        Poly d = eval(x.kids[1]);
        if (d.size() != 1) throw Error(ErrorCode::MalformedElement, "division by a polynomial");
        auto u = is_unit(d[0]);
        if (!u.is_unit()) throw Error(ErrorCode::MalformedElement, "division by a non-unit");
        return mul(eval(x.kids[0]), {*u.inverse});
      }
      case Expr::Pow: {
        if (x.exponent < 0) throw Error(ErrorCode::MalformedElement, "negative power in a polynomial");
        Poly b = eval(x.kids[0]), out{one()};
        for (long k = 0; k < x.exponent; ++k) out = mul(out, b);
        return out;
      }
      case Expr::Tuple: return trim({eval_expr(x, base_)});
    }
    return {};
  }

 private:
  Element zero() const { return Element::zero(base_); }
  Element one() const { return Element::one(base_); }
  Poly trim(Poly p) const {
    while (!p.empty() && p.back().is_zero()) p.pop_back();
    return p;
  }
  Poly add(Poly a, const Poly& b) const {
    if (a.size() < b.size()) a.resize(b.size(), zero());
    for (std::size_t i = 0; i < b.size(); ++i) a[i] = a[i] + b[i];
    return trim(std::move(a));
  }
  Poly neg(Poly a) const {
    for (auto& c : a) c = -c;
    return a;
  }
  Poly mul(const Poly& a, const Poly& b) const {
    if (a.empty() || b.empty()) return {};
    Poly out(a.size() + b.size() - 1, zero());
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = out[i + j] + a[i] * b[j];
    return trim(std::move(out));
  }

  RingPtr base_;
  std::string var_;
};

}  // namespace detail

/// Parses an element such as "1 - 1/2*x", "(1 - w)*x", "2*y^-1" or "(1, -1)".
inline Element parse_element(const RingPtr& r, std::string_view text) {
  return detail::eval_expr(parse_expr(text), r);
}

/// Coefficients (lowest first) of a polynomial in `var` over `base`.
inline std::vector<Value> parse_polynomial(const RingPtr& base, const std::string& var, std::string_view text) {
  auto p = detail::PolyEval(base, var).eval(parse_expr(text));
  std::vector<Value> out;
  for (auto& c : p) out.push_back(c.value());
  return out;
}

// ---------------------------------------------------------------------------
// Descriptor grammar

namespace detail {

class DescriptorParser {
 public:
  explicit DescriptorParser(std::string_view s) : s_(s) {}

  RingPtr parse() {
    RingPtr r = product_expr();
    skip();
    if (pos_ != s_.size()) fail("trailing input");
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::UnknownRingConstructor,
                msg + " at column " + std::to_string(pos_ + 1) + " in \"" + std::string(s_) + "\"");
  }
  void skip() {
    while (pos_ < s_.size() && s_[pos_] == ' ') ++pos_;
  }
  bool eat(std::string_view tok) {
    skip();
    if (s_.substr(pos_, tok.size()) != tok) return false;
    pos_ += tok.size();
    return true;
  }
  Integer number() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a number");
    return Integer(std::string(s_.substr(start, pos_ - start)));
  }
  long signed_number() {
    bool neg = eat("-");
    Integer n = number();
    if (!n.fits_slong_p()) fail("degree out of range");
    return neg ? -n.get_si() : n.get_si();
  }
  std::string identifier() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    if (start == pos_ || std::isdigit(static_cast<unsigned char>(s_[start]))) fail("expected a variable name");
    return std::string(s_.substr(start, pos_ - start));
  }
  /// Text up to the matching close parenthesis (the opening one already consumed).
  std::string balanced() {
    int depth = 1;
    std::size_t start = pos_;
    while (pos_ < s_.size()) {
      if (s_[pos_] == '(') ++depth;
      if (s_[pos_] == ')' && --depth == 0) break;
      ++pos_;
    }
    if (pos_ >= s_.size()) fail("unbalanced parentheses");
    std::string out(s_.substr(start, pos_ - start));
    ++pos_;
    return out;
  }

  RingPtr product_expr() {
    std::vector<RingPtr> factors{atom()};
    while (eat("x ")) factors.push_back(atom());
    return product(std::move(factors));
  }

  RingPtr atom() {
    RingPtr r;
    skip();
    if (eat("(")) {
      r = product_expr();
      if (!eat(")")) fail("expected ')'");
    } else if (eat("GF(")) {
      Integer p = number();
      if (!eat(")")) fail("expected ')'");
      r = prime_field(p);
    } else if (eat("Z/")) {
      r = residue_ring(number());
    } else if (eat("Z")) {
      r = integers();
    } else if (eat("Q")) {
      r = rationals();
    } else {
      fail("unknown ring constructor");
    }
    while (eat("[")) r = suffix(r);
    return r;
  }

  RingPtr suffix(const RingPtr& base) {
    skip();
    if (eat("1/")) {
      Integer n = number();
      if (!eat("]")) fail("expected ']'");
      if (n < 2) fail("localization at " + n.get_str());
      return localization(base, prime_support(n));
    }
    std::string var = identifier();
    if (eat(",")) {
      std::string inv = identifier();
      if (inv != var || !eat("^-1")) fail("expected " + var + "^-1");
      long deg = 1;
      bool graded = false;
      if (eat(";deg=")) {
        deg = signed_number();
        graded = true;
      }
      if (!eat("]")) fail("expected ']'");
      return laurent(base, var, deg, graded);
    }
    std::optional<long> deg;
    if (eat(";deg=")) deg = signed_number();
    if (!eat("]")) fail("expected ']'");
    if (!eat("/(")) fail("expected '/(' after polynomial ring");
    std::string poly = balanced();
    std::vector<Value> f;
    try {
      f = parse_polynomial(base, var, poly);
    } catch (const Error& e) {
      fail(std::string("bad polynomial: ") + e.what());
    }
    return monic_quotient(base, var, std::move(f), deg);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses a ring descriptor such as "Z[1/2][x]/(x^2+1)" or "Z[1/2][y,y^-1;deg=4]".
inline RingPtr parse_ring(std::string_view text) { return detail::DescriptorParser(text).parse(); }

// ---------------------------------------------------------------------------

/// True iff the e_i are idempotent, pairwise orthogonal and sum to 1.
inline bool complete_orthogonal_idempotents(const std::vector<Element>& es) {
  if (es.empty()) return false;
  const RingPtr& r = es[0].ring();
  Element sum = Element::zero(r);
  for (std::size_t i = 0; i < es.size(); ++i) {
    if (!same_ring(es[i].ring(), r)) throw Error(ErrorCode::DescriptorMismatch, "idempotent family");
    if (es[i] * es[i] != es[i]) return false;
    for (std::size_t j = i + 1; j < es.size(); ++j)
      if (!(es[i] * es[j]).is_zero()) return false;
    sum = sum + es[i];
  }
  return sum.is_one();
}

/// Homogeneous degree of a nonzero homogeneous element, if it has one.
inline std::optional<long> homogeneous_degree(const Element& e) {
  auto c = e.ring()->components(e.value());
  if (c.size() != 1) return std::nullopt;
  return c.begin()->first;
}

}  // namespace galois
