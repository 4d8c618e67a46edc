#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "rode/error.hpp"
#include "rode/gaussian_rational.hpp"
#include "rode/matrix.hpp"
#include "rode/ratfunc.hpp"

namespace rode {

/// Order of a Laurent series: an integer, or one of the two sentinels used
/// for the zero series (+inf for leading orders, -inf for trailing ones).
class Order {
 public:
  enum class Kind { finite, plus_infinity, minus_infinity };

  Order(std::int64_t value) : value_(value) {}  // NOLINT(implicit)
  static Order plus_infinity() { return Order(Kind::plus_infinity); }
  static Order minus_infinity() { return Order(Kind::minus_infinity); }

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Kind::finite; }
  std::int64_t value() const {
    if (!is_finite()) throw PreconditionViolation("value() of an infinite order");
    return value_;
  }

  friend std::strong_ordering operator<=>(const Order& a, const Order& b) {
    if (a.rank() != b.rank()) return a.rank() <=> b.rank();
    if (!a.is_finite()) return std::strong_ordering::equal;
    return a.value_ <=> b.value_;
  }
  friend bool operator==(const Order& a, const Order& b) { return (a <=> b) == 0; }

  /// Sum with sentinel absorption. +inf + -inf has no meaning and throws.
  friend Order operator+(const Order& a, const Order& b) {
    if (a.is_finite() && b.is_finite()) return Order(a.value_ + b.value_);
    if (!a.is_finite() && !b.is_finite() && a.kind_ != b.kind_)
      throw PreconditionViolation("sum of opposite infinite orders");
    return a.is_finite() ? b : a;
  }

  std::string to_string() const {
    switch (kind_) {
      case Kind::plus_infinity: return "+inf";
      case Kind::minus_infinity: return "-inf";
      default: return std::to_string(value_);
    }
  }
  friend std::ostream& operator<<(std::ostream& os, const Order& o) { return os << o.to_string(); }

 private:
  explicit Order(Kind k) : kind_(k) {}
  int rank() const { return kind_ == Kind::minus_infinity ? 0 : kind_ == Kind::finite ? 1 : 2; }

  Kind kind_ = Kind::finite;
  std::int64_t value_ = 0;
};

/// Center of a Laurent expansion: a finite point rho in Q(i), or infinity.
class ExpansionPoint {
 public:
  static ExpansionPoint finite(GaussianRational rho) { return ExpansionPoint(false, std::move(rho)); }
  static ExpansionPoint infinity() { return ExpansionPoint(true, GaussianRational()); }

  bool is_infinity() const { return infinite_; }
  const GaussianRational& rho() const {
    if (infinite_) throw PreconditionViolation("rho() of the point at infinity");
    return rho_;
  }

  /// The local coordinate: (r - rho) at finite points, r at infinity.
  RatFunc local_variable() const {
    return infinite_ ? RatFunc::r() : RatFunc(Poly::linear(rho_));
  }

  friend bool operator==(const ExpansionPoint& a, const ExpansionPoint& b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.rho_ == b.rho_);
  }
  friend std::strong_ordering operator<=>(const ExpansionPoint& a, const ExpansionPoint& b) {
    if (a.infinite_ != b.infinite_) return a.infinite_ ? std::strong_ordering::greater : std::strong_ordering::less;
    if (a.infinite_) return std::strong_ordering::equal;
    return a.rho_ <=> b.rho_;
  }

  std::string to_string() const { return infinite_ ? "inf" : rho_.to_string(); }
  friend std::ostream& operator<<(std::ostream& os, const ExpansionPoint& p) { return os << p.to_string(); }

 private:
  ExpansionPoint(bool inf, GaussianRational rho) : infinite_(inf), rho_(std::move(rho)) {}
  bool infinite_;
  GaussianRational rho_;
};

/// Leading order at a finite point, trailing order (deg num - deg den) at
/// infinity. The zero function maps to +inf resp. -inf.
inline Order valuation(const RatFunc& f, const ExpansionPoint& p) {
  if (p.is_infinity()) {
    if (f.is_zero()) return Order::minus_infinity();
    return Order(f.num().degree() - f.den().degree());
  }
  if (f.is_zero()) return Order::plus_infinity();
  return Order(static_cast<std::int64_t>(f.num().root_multiplicity(p.rho())) -
               static_cast<std::int64_t>(f.den().root_multiplicity(p.rho())));
}

/// Truncated Laurent expansion. coeffs[k] multiplies (r-rho)^(valuation+k)
/// at finite points and r^(valuation-k) at infinity.
struct LaurentExpansion {
  ExpansionPoint point = ExpansionPoint::finite(0);
  Order valuation = Order::plus_infinity();
  std::vector<GaussianRational> coeffs;
  /// First exponent not covered by coeffs.
  Order truncation_order = Order::plus_infinity();

  /// Coefficient of the given exponent, zero outside the computed window.
  GaussianRational coeff_of(std::int64_t exponent) const {
    if (!valuation.is_finite()) return {};
    const std::int64_t k = point.is_infinity() ? valuation.value() - exponent : exponent - valuation.value();
    if (k < 0 || k >= static_cast<std::int64_t>(coeffs.size())) return {};
    return coeffs[static_cast<std::size_t>(k)];
  }
};

namespace detail {

/// First `terms` coefficients of num/den as a power series in t, where
/// den(0) != 0.
inline std::vector<GaussianRational> series_quotient(const Poly& num, const Poly& den, std::size_t terms) {
  std::vector<GaussianRational> c(terms);
  const GaussianRational inv0 = den.coeff(0).inverse();
  for (std::size_t k = 0; k < terms; ++k) {
    GaussianRational acc = num.coeff(k);
    const std::size_t jmax = std::min<std::size_t>(k, den.coeffs().size() ? den.coeffs().size() - 1 : 0);
    for (std::size_t j = 1; j <= jmax; ++j) acc -= den.coeff(j) * c[k - j];
    c[k] = acc * inv0;
  }
  return c;
}

/// Numerator and denominator in the local coordinate t, each with its
/// powers of t stripped; returns the valuation.
inline std::int64_t local_parts(const RatFunc& f, const ExpansionPoint& p, Poly& num, Poly& den) {
  if (p.is_infinity()) {
    // f(1/t) = t^(dd - dn) * rev(num)(t) / rev(den)(t)
    const auto dn = static_cast<std::size_t>(f.num().degree());
    const auto dd = static_cast<std::size_t>(f.den().degree());
    num = f.num().reversed(dn);
    den = f.den().reversed(dd);
    return static_cast<std::int64_t>(dn) - static_cast<std::int64_t>(dd);
  }
  num = f.num().shifted(p.rho());
  den = f.den().shifted(p.rho());
  const std::size_t a = num.low_degree();
  const std::size_t b = den.low_degree();
  num = Poly(std::vector<GaussianRational>(num.coeffs().begin() + static_cast<std::ptrdiff_t>(a), num.coeffs().end()));
  den = Poly(std::vector<GaussianRational>(den.coeffs().begin() + static_cast<std::ptrdiff_t>(b), den.coeffs().end()));
  return static_cast<std::int64_t>(a) - static_cast<std::int64_t>(b);
}

}  // namespace detail

inline LaurentExpansion expand(const RatFunc& f, const ExpansionPoint& p, std::size_t terms) {
  if (terms == 0) throw PreconditionViolation("expand: terms must be positive");
  LaurentExpansion out;
  out.point = p;
  if (f.is_zero()) {
    out.valuation = p.is_infinity() ? Order::minus_infinity() : Order::plus_infinity();
    out.truncation_order = out.valuation;
    return out;
  }
  Poly num, den;
  const std::int64_t v = detail::local_parts(f, p, num, den);
  out.valuation = Order(v);
  out.coeffs = detail::series_quotient(num, den, terms);
  const auto t = static_cast<std::int64_t>(terms);
  out.truncation_order = Order(p.is_infinity() ? v - t : v + t);
  return out;
}

/// Coefficient of (r-rho)^0 (resp. r^0 at infinity); requires the function
/// to be regular there, i.e. valuation >= 0 (resp. <= 0).
inline GaussianRational order_zero_coefficient(const RatFunc& f, const ExpansionPoint& p) {
  const Order v = valuation(f, p);
  if (!v.is_finite()) return {};
  if (p.is_infinity() ? v.value() > 0 : v.value() < 0)
    throw PreconditionViolation("order_zero_coefficient: function has a pole at " + p.to_string());
  if (v.value() != 0) return {};
  return expand(f, p, 1).coeffs.front();
}

/// Per-component orders of a vector, the global order and the matching
/// coefficient vector.
struct VectorOrder {
  std::vector<Order> orders;
  Order global = Order::plus_infinity();
  std::vector<GaussianRational> coeff;
};

/// Leading data at a finite point: global = min of component orders.
inline VectorOrder vector_leading_order(const RatVec& v, const ExpansionPoint& p) {
  if (p.is_infinity()) throw PreconditionViolation("leading order requires a finite point; use vector_trailing_order");
  VectorOrder out;
  out.coeff.resize(v.size());
  for (const auto& f : v) out.orders.push_back(valuation(f, p));
  for (const auto& o : out.orders) out.global = std::min(out.global, o);
  if (!out.global.is_finite()) return out;
  for (std::size_t k = 0; k < v.size(); ++k)
    if (out.orders[k] == out.global) out.coeff[k] = expand(v[k], p, 1).coeffs.front();
  return out;
}

/// Trailing data at infinity: global = max of component orders.
inline VectorOrder vector_trailing_order(const RatVec& v) {
  const ExpansionPoint p = ExpansionPoint::infinity();
  VectorOrder out;
  out.global = Order::minus_infinity();
  out.coeff.resize(v.size());
  for (const auto& f : v) out.orders.push_back(valuation(f, p));
  for (const auto& o : out.orders) out.global = std::max(out.global, o);
  if (!out.global.is_finite()) return out;
  for (std::size_t k = 0; k < v.size(); ++k)
    if (out.orders[k] == out.global) out.coeff[k] = expand(v[k], p, 1).coeffs.front();
  return out;
}

/// Leading data at finite points, trailing data at infinity.
inline VectorOrder vector_order(const RatVec& v, const ExpansionPoint& p) {
  return p.is_infinity() ? vector_trailing_order(v) : vector_leading_order(v, p);
}

}  // namespace rode
