#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "galois/berkowitz.hpp"
#include "galois/error.hpp"
#include "galois/integer.hpp"

namespace galois {

struct Value;

/// Dense Laurent coefficients: coeffs[k] is the coefficient of y^(low + k).
/// Canonical form has no zero coefficient at either end; zero is {0, {}}.
struct LaurentRep {
  long low = 0;
  std::vector<Value> coeffs;
  bool operator==(const LaurentRep& o) const;
};

/// Canonical-form payload of a ring element. Which alternative is used is
/// decided by the owning ring: scalars hold a Rational, quotient rings hold
/// their coefficient vector, products hold their tuple.
struct Value {
  std::variant<Rational, std::vector<Value>, LaurentRep> rep;

  Value() : rep(Rational(0)) {}
  Value(Rational q) : rep(std::move(q)) {}                // NOLINT
  Value(std::vector<Value> v) : rep(std::move(v)) {}      // NOLINT
  Value(LaurentRep l) : rep(std::move(l)) {}              // NOLINT

  const Rational& scalar() const { return std::get<Rational>(rep); }
  const std::vector<Value>& vec() const { return std::get<std::vector<Value>>(rep); }
  const LaurentRep& laurent() const { return std::get<LaurentRep>(rep); }

  bool operator==(const Value& o) const { return rep == o.rep; }
  bool operator!=(const Value& o) const { return !(rep == o.rep); }
};

inline bool LaurentRep::operator==(const LaurentRep& o) const {
  return low == o.low && coeffs == o.coeffs;
}

class Ring;
using RingPtr = std::shared_ptr<const Ring>;
class Element;

enum class UnitStatus { Unit, NonUnit, Undecided };

struct UnitVerdict {
  UnitStatus status = UnitStatus::Undecided;
  std::optional<Value> inverse;
};

enum class RingKind { Scalar, Quotient, Laurent, Product };

/// A node of the ring constructor tree. Rings are immutable and shared.
class Ring : public std::enable_shared_from_this<Ring> {
 public:
  virtual ~Ring() = default;

  virtual RingKind kind() const = 0;
  /// Canonical serialization; two rings are equal iff their keys are equal.
  const std::string& key() const { return key_; }
  bool graded() const { return graded_; }

  virtual Value zero() const = 0;
  virtual Value one() const = 0;
  virtual Value from_integer(const Integer& n) const = 0;
  virtual Value add(const Value& a, const Value& b) const = 0;
  virtual Value neg(const Value& a) const = 0;
  virtual Value mul(const Value& a, const Value& b) const = 0;
  virtual UnitVerdict unit_test(const Value& a) const = 0;
  virtual std::string format(const Value& a) const = 0;
  /// Throws MalformedElement if the payload is not a canonical element of this ring.
  virtual void validate(const Value& a) const = 0;
  /// Brings a well-shaped payload into canonical form.
  virtual Value normalize(const Value& a) const = 0;
  /// All elements, for finite rings.
  virtual std::optional<std::vector<Value>> enumerate() const = 0;
  virtual std::optional<Integer> cardinality() const = 0;
  /// True when the ring is known to be an integral domain.
  virtual bool is_domain() const = 0;
  /// Degree -> homogeneous component. Ungraded rings put everything in degree 0.
  virtual std::map<long, Value> components(const Value& a) const = 0;
  /// Names of the adjoined variables of this ring and everything below it.
  virtual std::vector<std::string> variables() const = 0;

  bool is_zero(const Value& a) const { return a == zero(); }
  Value sub(const Value& a, const Value& b) const { return add(a, neg(b)); }

  RingPtr self() const { return shared_from_this(); }

 protected:
  std::string key_;
  bool graded_ = false;
};

inline bool same_ring(const RingPtr& a, const RingPtr& b) {
  return a == b || (a && b && a->key() == b->key());
}

/// An element of a supported ring: a ring reference plus canonical payload.
class Element {
 public:
  Element() = default;
  Element(RingPtr ring, Value v) : ring_(std::move(ring)), v_(std::move(v)) {}

  static Element zero(const RingPtr& r) { return {r, r->zero()}; }
  static Element one(const RingPtr& r) { return {r, r->one()}; }
  static Element integer(const RingPtr& r, const Integer& n) { return {r, r->from_integer(n)}; }

  const RingPtr& ring() const { return ring_; }
  const Value& value() const { return v_; }

  bool is_zero() const { return ring_->is_zero(v_); }
  bool is_one() const { return v_ == ring_->one(); }
  std::string str() const { return ring_ ? ring_->format(v_) : "<null>"; }

  friend Element operator+(const Element& a, const Element& b) {
    check(a, b);
    return {a.ring_, a.ring_->add(a.v_, b.v_)};
  }
  friend Element operator-(const Element& a, const Element& b) {
    check(a, b);
    return {a.ring_, a.ring_->sub(a.v_, b.v_)};
  }
  friend Element operator*(const Element& a, const Element& b) {
    check(a, b);
    return {a.ring_, a.ring_->mul(a.v_, b.v_)};
  }
  Element operator-() const { return {ring_, ring_->neg(v_)}; }
  Element& operator+=(const Element& b) { return *this = *this + b; }
  Element& operator*=(const Element& b) { return *this = *this * b; }

  friend bool operator==(const Element& a, const Element& b) {
    if (!a.ring_ || !b.ring_) return a.ring_ == b.ring_;
    return same_ring(a.ring_, b.ring_) && a.v_ == b.v_;
  }
  friend bool operator!=(const Element& a, const Element& b) { return !(a == b); }

  friend std::ostream& operator<<(std::ostream& os, const Element& e) { return os << e.str(); }

  Element pow(long k) const;

 private:
  static void check(const Element& a, const Element& b) {
    if (!same_ring(a.ring_, b.ring_))
      throw Error(ErrorCode::DescriptorMismatch,
                  (a.ring_ ? a.ring_->key() : "<null>") + " vs " +
                      (b.ring_ ? b.ring_->key() : "<null>"));
  }

  RingPtr ring_;
  Value v_;
};

struct UnitResult {
  UnitStatus status = UnitStatus::Undecided;
  std::optional<Element> inverse;
  bool is_unit() const { return status == UnitStatus::Unit; }
};

/// Unit recognition by the ring's own decision procedure.
inline UnitResult is_unit(const Element& e) {
  auto v = e.ring()->unit_test(e.value());
  UnitResult r;
  r.status = v.status;
  if (v.inverse) r.inverse = Element(e.ring(), *v.inverse);
  return r;
}

inline Element Element::pow(long k) const {
  if (k < 0) {
    auto u = is_unit(*this);
    if (!u.is_unit()) throw Error(ErrorCode::NotAUnit, "negative power of " + str());
    return u.inverse->pow(-k);
  }
  Element result = one(ring_);
  Element base = *this;
  while (k > 0) {
    if (k & 1) result = result * base;
    base = base * base;
    k >>= 1;
  }
  return result;
}

// ---------------------------------------------------------------------------
// Scalar rings: Z, Q, GF(p), Z/m, Z[1/n]. Every element is a Rational.

enum class ScalarKind { Integers, Rationals, PrimeField, Residue, Localized };

class ScalarRing final : public Ring {
 public:
  ScalarRing(ScalarKind k, Integer modulus, std::set<Integer> primes)
      : kind_(k), modulus_(std::move(modulus)), primes_(std::move(primes)) {
    switch (kind_) {
      case ScalarKind::Integers: key_ = "Z"; break;
      case ScalarKind::Rationals: key_ = "Q"; break;
      case ScalarKind::PrimeField: key_ = "GF(" + modulus_.get_str() + ")"; break;
      case ScalarKind::Residue: key_ = "Z/" + modulus_.get_str(); break;
      case ScalarKind::Localized: {
        Integer n = 1;
        for (const auto& p : primes_) n *= p;
        key_ = "Z[1/" + n.get_str() + "]";
        break;
      }
    }
  }

  RingKind kind() const override { return RingKind::Scalar; }
  ScalarKind scalar_kind() const { return kind_; }
  const Integer& modulus() const { return modulus_; }
  const std::set<Integer>& inverted_primes() const { return primes_; }
  bool finite() const { return kind_ == ScalarKind::PrimeField || kind_ == ScalarKind::Residue; }

  Value zero() const override { return Rational(0); }
  Value one() const override { return normalize(Rational(1)); }
  Value from_integer(const Integer& n) const override { return normalize(Rational(n)); }

  /// Image of a rational number, if its denominator is invertible here.
  std::optional<Rational> from_rational(const Rational& q) const {
    switch (kind_) {
      case ScalarKind::Rationals: return q;
      case ScalarKind::Integers:
        if (q.get_den() != 1) return std::nullopt;
        return q;
      case ScalarKind::Localized:
        if (strip_primes(q.get_den(), primes_) != 1) return std::nullopt;
        return q;
      case ScalarKind::PrimeField:
      case ScalarKind::Residue: {
        Integer inv = mod_inverse(q.get_den(), modulus_);
        if (modulus_ != 1 && inv == 0) return std::nullopt;
        return Rational(mod_floor(q.get_num() * inv, modulus_));
      }
    }
    return std::nullopt;
  }

  Value add(const Value& a, const Value& b) const override {
    return normalize(Rational(a.scalar() + b.scalar()));
  }
  Value neg(const Value& a) const override { return normalize(Rational(-a.scalar())); }
  Value mul(const Value& a, const Value& b) const override {
    return normalize(Rational(a.scalar() * b.scalar()));
  }

  Value normalize(const Value& a) const override {
    Rational q = a.scalar();
    q.canonicalize();
    if (finite()) {
      auto r = from_rational(q);
      if (!r) throw Error(ErrorCode::MalformedElement, to_string(q) + " in " + key_);
      return *r;
    }
    return q;
  }

  void validate(const Value& a) const override {
    if (!std::holds_alternative<Rational>(a.rep))
      throw Error(ErrorCode::MalformedElement, "expected a scalar in " + key_);
    const Rational& q = a.scalar();
    bool ok = true;
    switch (kind_) {
      case ScalarKind::Rationals: break;
      case ScalarKind::Integers: ok = q.get_den() == 1; break;
      case ScalarKind::Localized: ok = strip_primes(q.get_den(), primes_) == 1; break;
      case ScalarKind::PrimeField:
      case ScalarKind::Residue:
        ok = q.get_den() == 1 && q.get_num() >= 0 && q.get_num() < modulus_;
        break;
    }
    if (!ok) throw Error(ErrorCode::MalformedElement, to_string(q) + " is not in " + key_);
  }

  UnitVerdict unit_test(const Value& a) const override {
    const Rational& q = a.scalar();
    UnitVerdict v;
    v.status = UnitStatus::NonUnit;
    switch (kind_) {
      case ScalarKind::Rationals:
        if (q != 0) v.status = UnitStatus::Unit;
        break;
      case ScalarKind::Integers:
        if (q == 1 || q == -1) v.status = UnitStatus::Unit;
        break;
      case ScalarKind::Localized:
        if (q != 0 && abs(strip_primes(q.get_num(), primes_)) == 1) v.status = UnitStatus::Unit;
        break;
      case ScalarKind::PrimeField:
      case ScalarKind::Residue:
        if (modulus_ == 1 || mod_inverse(q.get_num(), modulus_) != 0) v.status = UnitStatus::Unit;
        break;
    }
    if (v.status == UnitStatus::Unit) {
      if (finite())
        v.inverse = Value(Rational(modulus_ == 1 ? Integer(0) : mod_inverse(q.get_num(), modulus_)));
      else
        v.inverse = Value(Rational(1 / q));
    }
    return v;
  }

  std::string format(const Value& a) const override { return to_string(a.scalar()); }

  std::optional<std::vector<Value>> enumerate() const override {
    if (!finite()) return std::nullopt;
    std::vector<Value> out;
    for (Integer i = 0; i < modulus_; ++i) out.emplace_back(Rational(i));
    return out;
  }
  std::optional<Integer> cardinality() const override {
    if (!finite()) return std::nullopt;
    return modulus_;
  }
  bool is_domain() const override {
    if (kind_ == ScalarKind::Residue) return is_probable_prime(modulus_);
    return true;
  }
  std::map<long, Value> components(const Value& a) const override {
    if (is_zero(a)) return {};
    return {{0, a}};
  }
  std::vector<std::string> variables() const override { return {}; }

 private:
  ScalarKind kind_;
  Integer modulus_;
  std::set<Integer> primes_;
};

// ---------------------------------------------------------------------------
// Monic quotient B[x]/(f). Elements are coefficient vectors of length deg f
// in the monomial basis 1, x, ..., x^(d-1).

class QuotientRing final : public Ring {
 public:
  /// `modulus` lists the coefficients of f from x^0 to x^d; it must be monic.
  QuotientRing(RingPtr base, std::string var, std::vector<Value> modulus,
               std::optional<long> var_degree)
      : base_(std::move(base)), var_(std::move(var)), f_(std::move(modulus)),
        var_degree_(var_degree) {
    if (f_.size() < 2)
      throw Error(ErrorCode::UnknownRingConstructor, "quotient polynomial must have degree >= 1");
    for (auto& c : f_) {
      base_->validate(c);
    }
    if (f_.back() != base_->one())
      throw Error(ErrorCode::UnknownRingConstructor, "quotient polynomial is not monic");
    for (const auto& v : base_->variables())
      if (v == var_)
        throw Error(ErrorCode::UnknownRingConstructor, "variable " + var_ + " reused");
    graded_ = var_degree_.has_value() || base_->graded();
    key_ = base_key() + "[" + var_ + (var_degree_ ? ";deg=" + std::to_string(*var_degree_) : "") +
           "]/(" + format_poly(f_) + ")";
  }

  RingKind kind() const override { return RingKind::Quotient; }
  const RingPtr& base() const { return base_; }
  const std::string& var() const { return var_; }
  const std::vector<Value>& modulus() const { return f_; }
  std::size_t degree() const { return f_.size() - 1; }
  long var_degree() const { return var_degree_.value_or(0); }
  bool has_var_degree() const { return var_degree_.has_value(); }

  Value zero() const override { return std::vector<Value>(degree(), base_->zero()); }
  Value one() const override {
    auto v = std::vector<Value>(degree(), base_->zero());
    v[0] = base_->one();
    return v;
  }
  Value from_integer(const Integer& n) const override {
    auto v = std::vector<Value>(degree(), base_->zero());
    v[0] = base_->from_integer(n);
    return v;
  }
  /// Constant embedding of a base payload.
  Value constant(const Value& b) const {
    auto v = std::vector<Value>(degree(), base_->zero());
    v[0] = b;
    return v;
  }
  /// The class of x^k (k >= 0).
  Value monomial(std::size_t k) const {
    std::vector<Value> c(k + 1, base_->zero());
    c[k] = base_->one();
    return reduce(std::move(c));
  }

  Value add(const Value& a, const Value& b) const override {
    const auto& x = a.vec();
    const auto& y = b.vec();
    std::vector<Value> out(degree());
    for (std::size_t i = 0; i < degree(); ++i) out[i] = base_->add(x[i], y[i]);
    return out;
  }
  Value neg(const Value& a) const override {
    std::vector<Value> out(degree());
    for (std::size_t i = 0; i < degree(); ++i) out[i] = base_->neg(a.vec()[i]);
    return out;
  }
  Value mul(const Value& a, const Value& b) const override {
    const auto& x = a.vec();
    const auto& y = b.vec();
    const std::size_t d = degree();
    std::vector<Value> prod(2 * d - 1, base_->zero());
    const bool odd = (var_degree() % 2) != 0;
    for (std::size_t j = 0; j < d; ++j) {
      if (base_->is_zero(y[j])) continue;
      // moving x^i past an odd-degree coefficient contributes (-1)^i
      Value even = y[j], oddpart = base_->zero();
      if (odd) split_parity(y[j], even, oddpart);
      for (std::size_t i = 0; i < d; ++i) {
        if (base_->is_zero(x[i])) continue;
        Value moved = (odd && (i % 2 == 1)) ? base_->sub(even, oddpart) : y[j];
        prod[i + j] = base_->add(prod[i + j], base_->mul(x[i], moved));
      }
    }
    return reduce(std::move(prod));
  }

  Value normalize(const Value& a) const override {
    std::vector<Value> c = a.vec();
    for (auto& x : c) x = base_->normalize(x);
    return reduce(std::move(c));
  }

  void validate(const Value& a) const override {
    if (!std::holds_alternative<std::vector<Value>>(a.rep) || a.vec().size() != degree())
      throw Error(ErrorCode::MalformedElement, "expected " + std::to_string(degree()) +
                                                   " coefficients over " + base_->key());
    for (const auto& c : a.vec()) base_->validate(c);
  }

  UnitVerdict unit_test(const Value& a) const override;

  std::string format(const Value& a) const override;

  std::optional<std::vector<Value>> enumerate() const override {
    auto be = base_->enumerate();
    if (!be) return std::nullopt;
    std::vector<Value> out;
    std::vector<std::size_t> idx(degree(), 0);
    for (;;) {
      std::vector<Value> c(degree());
      for (std::size_t i = 0; i < degree(); ++i) c[i] = (*be)[idx[i]];
      out.emplace_back(std::move(c));
      std::size_t k = 0;
      while (k < degree() && ++idx[k] == be->size()) idx[k++] = 0;
      if (k == degree()) break;
    }
    return out;
  }
  std::optional<Integer> cardinality() const override {
    auto b = base_->cardinality();
    if (!b) return std::nullopt;
    Integer n = 1;
    for (std::size_t i = 0; i < degree(); ++i) n *= *b;
    return n;
  }
  bool is_domain() const override { return false; }  // not decided here

  std::map<long, Value> components(const Value& a) const override {
    std::map<long, Value> out;
    for (std::size_t k = 0; k < degree(); ++k) {
      for (auto& [deg, c] : base_->components(a.vec()[k])) {
        long total = deg + static_cast<long>(k) * var_degree();
        auto it = out.find(total);
        std::vector<Value> term(degree(), base_->zero());
        term[k] = c;
        if (it == out.end())
          out.emplace(total, Value(std::move(term)));
        else
          it->second = add(it->second, Value(std::move(term)));
      }
    }
    return out;
  }
  std::vector<std::string> variables() const override {
    auto v = base_->variables();
    v.push_back(var_);
    return v;
  }

  std::string format_poly(const std::vector<Value>& coeffs) const;

 private:
  std::string base_key() const {
    return base_->kind() == RingKind::Product ? "(" + base_->key() + ")" : base_->key();
  }

  void split_parity(const Value& v, Value& even, Value& odd) const {
    even = base_->zero();
    odd = base_->zero();
    for (auto& [deg, c] : base_->components(v)) {
      if (deg % 2 == 0)
        even = base_->add(even, c);
      else
        odd = base_->add(odd, c);
    }
  }

  Value reduce(std::vector<Value> c) const {
    const std::size_t d = degree();
    for (std::size_t k = c.size(); k-- > d;) {
      if (base_->is_zero(c[k])) continue;
      Value lead = c[k];
      for (std::size_t i = 0; i < d; ++i) {
        if (base_->is_zero(f_[i])) continue;
        c[k - d + i] = base_->sub(c[k - d + i], base_->mul(lead, f_[i]));
      }
      c[k] = base_->zero();
    }
    c.resize(d, base_->zero());
    return c;
  }

  RingPtr base_;
  std::string var_;
  std::vector<Value> f_;
  std::optional<long> var_degree_;
};

// ---------------------------------------------------------------------------
// Laurent ring B[y, y^-1] with |y| = d.

class LaurentRing final : public Ring {
 public:
  LaurentRing(RingPtr base, std::string var, long degree, bool graded)
      : base_(std::move(base)), var_(std::move(var)), degree_(degree) {
    if (degree_ == 0) throw Error(ErrorCode::UnknownRingConstructor, "Laurent degree must be nonzero");
    for (const auto& v : base_->variables())
      if (v == var_)
        throw Error(ErrorCode::UnknownRingConstructor, "variable " + var_ + " reused");
    graded_ = graded || base_->graded();
    if (graded && degree_ % 2 != 0) {
      // y is a unit, and units of a graded-commutative ring with 2 != 0 sit in even degrees
      if (!base_->is_zero(base_->from_integer(2)))
        throw Error(ErrorCode::OddDegreeUnit, "Laurent variable of odd degree in a graded ring");
    }
    std::string b = base_->kind() == RingKind::Product ? "(" + base_->key() + ")" : base_->key();
    key_ = b + "[" + var_ + "," + var_ + "^-1" + (graded ? ";deg=" + std::to_string(degree_) : "") + "]";
  }

  RingKind kind() const override { return RingKind::Laurent; }
  const RingPtr& base() const { return base_; }
  const std::string& var() const { return var_; }
  long var_degree() const { return degree_; }

  Value zero() const override { return LaurentRep{}; }
  Value one() const override { return constant(base_->one()); }
  Value from_integer(const Integer& n) const override { return constant(base_->from_integer(n)); }
  Value constant(const Value& b) const { return trim(LaurentRep{0, {b}}); }
  Value monomial(long k, const Value& c) const { return trim(LaurentRep{k, {c}}); }

  Value add(const Value& a, const Value& b) const override {
    const auto& x = a.laurent();
    const auto& y = b.laurent();
    if (x.coeffs.empty()) return b;
    if (y.coeffs.empty()) return a;
    long lo = std::min(x.low, y.low);
    long hi = std::max(x.low + static_cast<long>(x.coeffs.size()),
                       y.low + static_cast<long>(y.coeffs.size()));
    LaurentRep out{lo, std::vector<Value>(static_cast<std::size_t>(hi - lo), base_->zero())};
    for (std::size_t i = 0; i < x.coeffs.size(); ++i)
      out.coeffs[static_cast<std::size_t>(x.low - lo) + i] = x.coeffs[i];
    for (std::size_t i = 0; i < y.coeffs.size(); ++i) {
      auto& slot = out.coeffs[static_cast<std::size_t>(y.low - lo) + i];
      slot = base_->add(slot, y.coeffs[i]);
    }
    return trim(std::move(out));
  }
  Value neg(const Value& a) const override {
    LaurentRep out = a.laurent();
    for (auto& c : out.coeffs) c = base_->neg(c);
    return out;
  }
  Value mul(const Value& a, const Value& b) const override {
    const auto& x = a.laurent();
    const auto& y = b.laurent();
    if (x.coeffs.empty() || y.coeffs.empty()) return zero();
    LaurentRep out{x.low + y.low,
                   std::vector<Value>(x.coeffs.size() + y.coeffs.size() - 1, base_->zero())};
    for (std::size_t i = 0; i < x.coeffs.size(); ++i) {
      if (base_->is_zero(x.coeffs[i])) continue;
      for (std::size_t j = 0; j < y.coeffs.size(); ++j) {
        if (base_->is_zero(y.coeffs[j])) continue;
        out.coeffs[i + j] = base_->add(out.coeffs[i + j], base_->mul(x.coeffs[i], y.coeffs[j]));
      }
    }
    return trim(std::move(out));
  }

  Value normalize(const Value& a) const override {
    LaurentRep out = a.laurent();
    for (auto& c : out.coeffs) c = base_->normalize(c);
    return trim(std::move(out));
  }

  void validate(const Value& a) const override {
    if (!std::holds_alternative<LaurentRep>(a.rep))
      throw Error(ErrorCode::MalformedElement, "expected Laurent coefficients");
    const auto& l = a.laurent();
    for (const auto& c : l.coeffs) base_->validate(c);
    if (!l.coeffs.empty() &&
        (base_->is_zero(l.coeffs.front()) || base_->is_zero(l.coeffs.back())))
      throw Error(ErrorCode::MalformedElement, "Laurent coefficients not trimmed");
    if (l.coeffs.empty() && l.low != 0)
      throw Error(ErrorCode::MalformedElement, "zero Laurent element with offset");
  }

  UnitVerdict unit_test(const Value& a) const override {
    const auto& l = a.laurent();
    UnitVerdict v;
    if (l.coeffs.size() == 1) {
      auto c = base_->unit_test(l.coeffs[0]);
      v.status = c.status;
      if (c.inverse) v.inverse = monomial(-l.low, *c.inverse);
      return v;
    }
    // a Laurent ring over a domain is a domain whose units are unit monomials
    v.status = base_->is_domain() ? UnitStatus::NonUnit : UnitStatus::Undecided;
    return v;
  }

  std::string format(const Value& a) const override;

  std::optional<std::vector<Value>> enumerate() const override { return std::nullopt; }
  std::optional<Integer> cardinality() const override { return std::nullopt; }
  bool is_domain() const override { return base_->is_domain(); }

  std::map<long, Value> components(const Value& a) const override {
    std::map<long, Value> out;
    const auto& l = a.laurent();
    for (std::size_t i = 0; i < l.coeffs.size(); ++i) {
      long k = l.low + static_cast<long>(i);
      for (auto& [deg, c] : base_->components(l.coeffs[i])) {
        long total = deg + k * degree_;
        Value term = monomial(k, c);
        auto it = out.find(total);
        if (it == out.end())
          out.emplace(total, term);
        else
          it->second = add(it->second, term);
      }
    }
    return out;
  }
  std::vector<std::string> variables() const override {
    auto v = base_->variables();
    v.push_back(var_);
    return v;
  }

 private:
  Value trim(LaurentRep l) const {
    std::size_t first = 0;
    while (first < l.coeffs.size() && base_->is_zero(l.coeffs[first])) ++first;
    if (first == l.coeffs.size()) return LaurentRep{};
    std::size_t last = l.coeffs.size();
    while (base_->is_zero(l.coeffs[last - 1])) --last;
    LaurentRep out{l.low + static_cast<long>(first),
                   std::vector<Value>(l.coeffs.begin() + static_cast<long>(first),
                                      l.coeffs.begin() + static_cast<long>(last))};
    return out;
  }

  RingPtr base_;
  std::string var_;
  long degree_;
};

// ---------------------------------------------------------------------------
// Finite products. Factors are kept sorted by key.

class ProductRing final : public Ring {
 public:
  explicit ProductRing(std::vector<RingPtr> factors) : factors_(std::move(factors)) {
    if (factors_.empty()) throw Error(ErrorCode::UnknownRingConstructor, "empty product");
    std::stable_sort(factors_.begin(), factors_.end(),
                     [](const RingPtr& a, const RingPtr& b) { return a->key() < b->key(); });
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      if (i) key_ += " x ";
      key_ += factors_[i]->kind() == RingKind::Product ? "(" + factors_[i]->key() + ")"
                                                       : factors_[i]->key();
    }
  }

  RingKind kind() const override { return RingKind::Product; }
  const std::vector<RingPtr>& factors() const { return factors_; }
  std::size_t size() const { return factors_.size(); }

  template <class F>
  Value zip(F&& f) const {
    std::vector<Value> out;
    out.reserve(factors_.size());
    for (std::size_t i = 0; i < factors_.size(); ++i) out.push_back(f(i, *factors_[i]));
    return out;
  }

  Value zero() const override { return zip([](std::size_t, const Ring& r) { return r.zero(); }); }
  Value one() const override { return zip([](std::size_t, const Ring& r) { return r.one(); }); }
  Value from_integer(const Integer& n) const override {
    return zip([&](std::size_t, const Ring& r) { return r.from_integer(n); });
  }
  /// The idempotent with 1 in slot i.
  Value idempotent(std::size_t i) const {
    return zip([&](std::size_t k, const Ring& r) { return k == i ? r.one() : r.zero(); });
  }
  Value add(const Value& a, const Value& b) const override {
    return zip([&](std::size_t i, const Ring& r) { return r.add(a.vec()[i], b.vec()[i]); });
  }
  Value neg(const Value& a) const override {
    return zip([&](std::size_t i, const Ring& r) { return r.neg(a.vec()[i]); });
  }
  Value mul(const Value& a, const Value& b) const override {
    return zip([&](std::size_t i, const Ring& r) { return r.mul(a.vec()[i], b.vec()[i]); });
  }
  Value normalize(const Value& a) const override {
    return zip([&](std::size_t i, const Ring& r) { return r.normalize(a.vec()[i]); });
  }
  void validate(const Value& a) const override {
    if (!std::holds_alternative<std::vector<Value>>(a.rep) || a.vec().size() != factors_.size())
      throw Error(ErrorCode::MalformedElement, "expected a " + std::to_string(factors_.size()) +
                                                   "-tuple in " + key_);
    for (std::size_t i = 0; i < factors_.size(); ++i) factors_[i]->validate(a.vec()[i]);
  }
  UnitVerdict unit_test(const Value& a) const override {
    UnitVerdict v;
    v.status = UnitStatus::Unit;
    std::vector<Value> inv;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      auto c = factors_[i]->unit_test(a.vec()[i]);
      if (c.status == UnitStatus::NonUnit) return {UnitStatus::NonUnit, std::nullopt};
      if (c.status == UnitStatus::Undecided) v.status = UnitStatus::Undecided;
      if (c.inverse) inv.push_back(*c.inverse);
    }
    if (v.status == UnitStatus::Unit) v.inverse = Value(std::move(inv));
    return v;
  }
  std::string format(const Value& a) const override {
    std::string s = "(";
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      if (i) s += ", ";
      s += factors_[i]->format(a.vec()[i]);
    }
    return s + ")";
  }
  std::optional<std::vector<Value>> enumerate() const override {
    std::vector<std::vector<Value>> parts;
    for (const auto& f : factors_) {
      auto e = f->enumerate();
      if (!e) return std::nullopt;
      parts.push_back(std::move(*e));
    }
    std::vector<Value> out;
    std::vector<std::size_t> idx(parts.size(), 0);
    for (;;) {
      std::vector<Value> t;
      for (std::size_t i = 0; i < parts.size(); ++i) t.push_back(parts[i][idx[i]]);
      out.emplace_back(std::move(t));
      std::size_t k = 0;
      while (k < parts.size() && ++idx[k] == parts[k].size()) idx[k++] = 0;
      if (k == parts.size()) break;
    }
    return out;
  }
  std::optional<Integer> cardinality() const override {
    Integer n = 1;
    for (const auto& f : factors_) {
      auto c = f->cardinality();
      if (!c) return std::nullopt;
      n *= *c;
    }
    return n;
  }
  bool is_domain() const override { return false; }
  std::map<long, Value> components(const Value& a) const override {
    std::map<long, Value> out;
    for (std::size_t i = 0; i < factors_.size(); ++i)
      for (auto& [deg, c] : factors_[i]->components(a.vec()[i])) {
        auto it = out.find(deg);
        if (it == out.end()) it = out.emplace(deg, zero()).first;
        std::vector<Value> t = it->second.vec();
        t[i] = c;
        it->second = Value(std::move(t));
      }
    return out;
  }
  std::vector<std::string> variables() const override { return {}; }

 private:
  std::vector<RingPtr> factors_;
};

// ---------------------------------------------------------------------------
// Formatting helpers shared by quotient and Laurent rings.

namespace detail {

inline bool is_atomic_number(const std::string& s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-') ? 1 : 0;
  if (i == s.size()) return false;
  bool slash = false;
  for (; i < s.size(); ++i) {
    if (s[i] == '/' && !slash) {
      slash = true;
      continue;
    }
    if (s[i] < '0' || s[i] > '9') return false;
  }
  return true;
}

/// Coefficient times monomial, e.g. "x", "-x^2", "1/2*x", "(1 - w)*x".
inline std::string term_string(const std::string& coeff, const std::string& mono) {
  if (mono.empty()) return coeff;
  if (coeff == "1") return mono;
  if (coeff == "-1") return "-" + mono;
  if (is_atomic_number(coeff)) return coeff + "*" + mono;
  return "(" + coeff + ")*" + mono;
}

inline std::string join_terms(const std::vector<std::string>& terms) {
  if (terms.empty()) return "0";
  std::string s = terms[0];
  for (std::size_t i = 1; i < terms.size(); ++i) {
    if (terms[i][0] == '-')
      s += " - " + terms[i].substr(1);
    else
      s += " + " + terms[i];
  }
  return s;
}

inline std::string power_string(const std::string& var, long k) {
  if (k == 0) return "";
  if (k == 1) return var;
  return var + "^" + std::to_string(k);
}

}  // namespace detail

inline std::string QuotientRing::format_poly(const std::vector<Value>& coeffs) const {
  std::vector<std::string> terms;
  for (std::size_t k = coeffs.size(); k-- > 0;) {
    if (base_->is_zero(coeffs[k])) continue;
    terms.push_back(detail::term_string(base_->format(coeffs[k]),
                                        detail::power_string(var_, static_cast<long>(k))));
  }
  return detail::join_terms(terms);
}

inline std::string QuotientRing::format(const Value& a) const {
  std::vector<std::string> terms;
  const auto& c = a.vec();
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (base_->is_zero(c[k])) continue;
    terms.push_back(detail::term_string(base_->format(c[k]),
                                        detail::power_string(var_, static_cast<long>(k))));
  }
  return detail::join_terms(terms);
}

inline std::string LaurentRing::format(const Value& a) const {
  std::vector<std::string> terms;
  const auto& l = a.laurent();
  for (std::size_t i = 0; i < l.coeffs.size(); ++i) {
    if (base_->is_zero(l.coeffs[i])) continue;
    terms.push_back(detail::term_string(base_->format(l.coeffs[i]),
                                        detail::power_string(var_, l.low + static_cast<long>(i))));
  }
  return detail::join_terms(terms);
}

inline UnitVerdict QuotientRing::unit_test(const Value& a) const {
  // a is a unit iff its multiplication matrix over the base has unit determinant
  const std::size_t d = degree();
  Element zero_b(base_, base_->zero()), one_b(base_, base_->one());
  Matrix<Element> m(d, d, zero_b);
  for (std::size_t j = 0; j < d; ++j) {
    Value col = mul(a, monomial(j));
    for (std::size_t i = 0; i < d; ++i) m(i, j) = Element(base_, col.vec()[i]);
  }
  auto cp = charpoly(m, zero_b, one_b);
  Element det = (d % 2 == 0) ? cp.back() : -cp.back();
  auto dv = is_unit(det);
  UnitVerdict v;
  v.status = dv.status;
  if (dv.status != UnitStatus::Unit) return v;
  // Cayley-Hamilton: a * (a^(d-1) + c1 a^(d-2) + ... + c_(d-1)) = -c_d
  Value acc = one();
  for (std::size_t k = 1; k < d; ++k) acc = add(mul(acc, a), constant(cp[k].value()));
  Element cd = cp.back();
  auto cinv = is_unit(cd);
  Value inv = mul(acc, constant(base_->neg(cinv.inverse->value())));
  if (mul(a, inv) != one() || mul(inv, a) != one()) {
    // odd-degree variables break the commutative Cayley-Hamilton argument
    v.status = UnitStatus::Undecided;
    return v;
  }
  v.inverse = inv;
  return v;
}

}  // namespace galois
