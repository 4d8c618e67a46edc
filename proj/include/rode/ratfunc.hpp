#pragma once

#include <algorithm>
#include <cstdlib>
#include <ostream>
#include <string>
#include <utility>

#include "rode/error.hpp"
#include "rode/gaussian_rational.hpp"
#include "rode/poly.hpp"

namespace rode {

/// Rational function of r over Q(i) in canonical form: monic denominator,
/// numerator and denominator coprime, zero stored as 0/1.
class RatFunc {
 public:
  RatFunc() : den_(1) {}
  RatFunc(Poly num) : num_(std::move(num)), den_(1) {}  // NOLINT(implicit)
  RatFunc(const GaussianRational& c) : num_(c), den_(1) {}  // NOLINT(implicit)
  template <std::integral I>
  RatFunc(I c) : num_(GaussianRational(c)), den_(1) {}  // NOLINT(implicit)
  RatFunc(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }

  static RatFunc r() { return RatFunc(Poly::x()); }

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.degree() == 0; }
  bool is_constant() const { return den_.degree() == 0 && num_.degree() <= 0; }
  /// Value of a constant function.
  GaussianRational constant_value() const {
    if (!is_constant()) throw PreconditionViolation("not a constant: " + to_string());
    return num_.coeff(0);
  }

  RatFunc& operator+=(const RatFunc& o) {
    if (o.is_zero()) return *this;
    if (den_ == o.den_) {
      num_ += o.num_;
    } else {
      num_ = num_ * o.den_ + o.num_ * den_;
      den_ = den_ * o.den_;
    }
    normalize();
    return *this;
  }
  RatFunc& operator-=(const RatFunc& o) { return *this += -o; }
  RatFunc& operator*=(const RatFunc& o) {
    if (is_zero() || o.is_zero()) return *this = RatFunc();
    // cross-cancel first so the products stay small
    const Poly g1 = gcd(num_, o.den_);
    const Poly g2 = gcd(o.num_, den_);
    num_ = num_.exact_div(g1) * o.num_.exact_div(g2);
    den_ = den_.exact_div(g2) * o.den_.exact_div(g1);
    fix_sign();
    return *this;
  }
  RatFunc& operator/=(const RatFunc& o) { return *this *= o.inverse(); }

  friend RatFunc operator+(RatFunc a, const RatFunc& b) { return a += b; }
  friend RatFunc operator-(RatFunc a, const RatFunc& b) { return a -= b; }
  friend RatFunc operator*(RatFunc a, const RatFunc& b) { return a *= b; }
  friend RatFunc operator/(RatFunc a, const RatFunc& b) { return a /= b; }
  RatFunc operator-() const {
    RatFunc out = *this;
    out.num_ = -out.num_;
    return out;
  }
  friend bool operator==(const RatFunc& a, const RatFunc& b) { return a.num_ == b.num_ && a.den_ == b.den_; }

  RatFunc inverse() const {
    if (is_zero()) throw DivisionByZero("inverse of the zero rational function");
    return RatFunc(den_, num_);
  }

  RatFunc derivative() const {
    if (is_polynomial()) return RatFunc(num_.derivative().scaled(den_.lc().inverse()));
    return RatFunc(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
  }

  RatFunc derivative(std::size_t k) const {
    RatFunc out = *this;
    for (std::size_t j = 0; j < k; ++j) out = out.derivative();
    return out;
  }

  GaussianRational eval(const GaussianRational& x) const {
    const GaussianRational d = den_.eval(x);
    if (d.is_zero()) throw DivisionByZero("evaluation at a pole: r = " + x.to_string());
    return num_.eval(x) / d;
  }

  std::string to_string() const {
    if (den_.degree() == 0) return num_.to_string();
    auto wrap = [](const Poly& p) {
      std::string s = p.to_string();
      const bool simple = p.degree() <= 0 || (p.coeffs().size() == static_cast<std::size_t>(p.degree() + 1) &&
                                               std::count_if(p.coeffs().begin(), p.coeffs().end(),
                                                             [](const auto& c) { return !c.is_zero(); }) == 1);
      return simple ? s : "(" + s + ")";
    };
    return wrap(num_) + "/" + wrap(den_);
  }

  friend std::ostream& operator<<(std::ostream& os, const RatFunc& f) { return os << f.to_string(); }

 private:
  void normalize() {
    if (den_.is_zero()) throw DivisionByZero("rational function with zero denominator");
    if (num_.is_zero()) {
      den_ = Poly(1);
      return;
    }
    if (den_.degree() > 0) {
      const Poly g = gcd(num_, den_);
      if (g.degree() > 0) {
        num_ = num_.exact_div(g);
        den_ = den_.exact_div(g);
      }
    }
    fix_sign();
  }
  void fix_sign() {
    const GaussianRational lc = den_.lc();
    if (lc == GaussianRational(1)) return;
    const GaussianRational inv = lc.inverse();
    num_ = num_.scaled(inv);
    den_ = den_.scaled(inv);
  }

  Poly num_;
  Poly den_;
};

/// f^k for any integer k; f must be nonzero when k < 0.
inline RatFunc pow(const RatFunc& f, long k) {
  if (k < 0) return pow(f.inverse(), -k);
  return RatFunc(pow(f.num(), static_cast<std::size_t>(k)), pow(f.den(), static_cast<std::size_t>(k)));
}

}  // namespace rode
