#pragma once

#include <cstddef>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "rode/error.hpp"
#include "rode/gaussian_rational.hpp"

namespace rode {

/// Name of the indeterminate. `r` is the independent variable of the ODEs,
/// `n` the symbolic Laurent index of characteristic matrices.
enum class Var { r, n };

inline const char* var_name(Var v) { return v == Var::r ? "r" : "n"; }

/// Dense univariate polynomial over Q(i), coefficients stored from degree 0
/// upward with no trailing zeros.
class Poly {
 public:
  using Coeff = GaussianRational;

  Poly() = default;
  explicit Poly(std::vector<Coeff> coeffs, Var var = Var::r) : var_(var), c_(std::move(coeffs)) { trim(); }
  Poly(const Coeff& constant, Var var = Var::r) : var_(var) {  // NOLINT(implicit)
    if (!constant.is_zero()) c_.push_back(constant);
  }
  template <std::integral I>
  Poly(I constant) : Poly(Coeff(constant)) {}  // NOLINT(implicit)

  static Poly zero(Var var = Var::r) { return Poly(std::vector<Coeff>{}, var); }
  static Poly x(Var var = Var::r) { return Poly({Coeff(0), Coeff(1)}, var); }
  static Poly monomial(const Coeff& c, std::size_t k, Var var = Var::r) {
    std::vector<Coeff> v(k + 1);
    v[k] = c;
    return Poly(std::move(v), var);
  }
  /// (x - root)
  static Poly linear(const Coeff& root, Var var = Var::r) { return Poly({-root, Coeff(1)}, var); }

  Var var() const { return var_; }
  bool is_zero() const { return c_.empty(); }
  bool is_constant() const { return c_.size() <= 1; }
  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<Coeff>& coeffs() const { return c_; }
  const Coeff& coeff(std::size_t k) const {
    static const Coeff zero;
    return k < c_.size() ? c_[k] : zero;
  }
  const Coeff& lc() const { return coeff(c_.empty() ? 0 : c_.size() - 1); }
  /// Index of the lowest nonzero coefficient (0 for the zero polynomial).
  std::size_t low_degree() const {
    for (std::size_t k = 0; k < c_.size(); ++k)
      if (!c_[k].is_zero()) return k;
    return 0;
  }

  Poly& operator+=(const Poly& o) {
    var_ = merged_var(o);
    if (c_.size() < o.c_.size()) c_.resize(o.c_.size());
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    trim();
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    var_ = merged_var(o);
    if (c_.size() < o.c_.size()) c_.resize(o.c_.size());
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
    trim();
    return *this;
  }
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  Poly operator-() const {
    Poly out = *this;
    for (auto& c : out.c_) c = -c;
    return out;
  }
  friend Poly operator*(const Poly& a, const Poly& b) {
    const Var v = a.merged_var(b);
    if (a.is_zero() || b.is_zero()) return Poly::zero(v);
    std::vector<Coeff> out(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i].is_zero()) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
    }
    return Poly(std::move(out), v);
  }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }
  Poly scaled(const Coeff& s) const {
    if (s.is_zero()) return Poly::zero(var_);
    Poly out = *this;
    for (auto& c : out.c_) c *= s;
    return out;
  }

  friend bool operator==(const Poly& a, const Poly& b) {
    if (a.c_ != b.c_) return false;
    return a.is_constant() || a.var_ == b.var_;
  }

  /// Euclidean division: *this = q * d + rem with deg rem < deg d.
  std::pair<Poly, Poly> divmod(const Poly& d) const {
    if (d.is_zero()) throw DivisionByZero("polynomial division by zero");
    const Var v = merged_var(d);
    if (degree() < d.degree()) return {Poly::zero(v), Poly(c_, v)};
    std::vector<Coeff> rem = c_;
    std::vector<Coeff> q(c_.size() - d.c_.size() + 1);
    const Coeff inv_lc = d.lc().inverse();
    for (std::size_t k = q.size(); k-- > 0;) {
      const Coeff& top = rem[k + d.c_.size() - 1];
      if (top.is_zero()) continue;
      const Coeff factor = top * inv_lc;
      q[k] = factor;
      for (std::size_t j = 0; j < d.c_.size(); ++j) rem[k + j] -= factor * d.c_[j];
    }
    rem.resize(d.c_.size() - 1);
    return {Poly(std::move(q), v), Poly(std::move(rem), v)};
  }
  friend Poly operator/(const Poly& a, const Poly& b) { return a.divmod(b).first; }
  friend Poly operator%(const Poly& a, const Poly& b) { return a.divmod(b).second; }

  /// Division that must leave no remainder.
  Poly exact_div(const Poly& d) const {
    auto [q, rem] = divmod(d);
    if (!rem.is_zero()) throw InternalError("inexact polynomial division");
    return q;
  }

  Poly monic() const {
    if (is_zero()) return *this;
    return scaled(lc().inverse());
  }

  Coeff eval(const Coeff& x) const {
    Coeff acc;
    for (std::size_t k = c_.size(); k-- > 0;) acc = acc * x + c_[k];
    return acc;
  }

  Poly derivative() const {
    if (c_.size() <= 1) return Poly::zero(var_);
    std::vector<Coeff> out(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) out[k - 1] = c_[k] * Coeff(static_cast<long>(k));
    return Poly(std::move(out), var_);
  }

  /// p(x + shift), by repeated synthetic division (Taylor shift).
  Poly shifted(const Coeff& shift) const {
    if (shift.is_zero() || c_.size() <= 1) return *this;
    std::vector<Coeff> a = c_;
    const std::size_t n = a.size();
    for (std::size_t i = 0; i + 1 < n; ++i)
      for (std::size_t k = n - 1; k-- > i;) a[k] += shift * a[k + 1];
    return Poly(std::move(a), var_);
  }

  /// x^d p(1/x) for d >= degree.
  Poly reversed(std::size_t d) const {
    std::vector<Coeff> out(d + 1);
    for (std::size_t k = 0; k < c_.size(); ++k) out[d - k] = c_[k];
    return Poly(std::move(out), var_);
  }

  /// Multiplicity of `root` as a zero; 0 if p(root) != 0. Undefined for 0.
  std::size_t root_multiplicity(const Coeff& root) const {
    if (is_zero()) return 0;
    return shifted(root).low_degree();
  }

  std::string to_string() const {
    if (c_.empty()) return "0";
    std::string out;
    for (std::size_t k = c_.size(); k-- > 0;) {
      if (c_[k].is_zero()) continue;
      std::string term = c_[k].to_string();
      const bool compound = !c_[k].is_real();
      if (k > 0) {
        if (compound) term = "(" + term + ")";
        else if (term == "1") term.clear();
        else if (term == "-1") term = "-";
        if (!term.empty() && term != "-") term += "*";
        term += var_name(var_);
        if (k > 1) term += "^" + std::to_string(k);
      } else if (compound && !out.empty()) {
        term = "(" + term + ")";
      }
      if (!out.empty()) out += term.front() == '-' ? " - " + term.substr(1) : " + " + term;
      else out = term;
    }
    return out;
  }

  friend std::ostream& operator<<(std::ostream& os, const Poly& p) { return os << p.to_string(); }

 private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }
  Var merged_var(const Poly& o) const {
    if (is_constant()) return o.is_constant() ? var_ : o.var_;
    if (!o.is_constant() && o.var_ != var_)
      throw DimensionMismatch("polynomials in different variables");
    return var_;
  }

  Var var_ = Var::r;
  std::vector<Coeff> c_;
};

/// Monic greatest common divisor; gcd(0, 0) = 0.
inline Poly gcd(Poly a, Poly b) {
  if (a.is_zero()) return b.monic();
  if (b.is_zero()) return a.monic();
  a = a.monic();
  b = b.monic();
  while (!b.is_zero()) {
    Poly rem = a % b;
    a = std::move(b);
    b = rem.monic();
  }
  return a.monic();
}

inline Poly lcm(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return Poly();
  return (a * b.exact_div(gcd(a, b))).monic();
}

inline Poly pow(const Poly& p, std::size_t k) {
  Poly out(GaussianRational(1), p.var());
  Poly base = p;
  while (k > 0) {
    if (k & 1) out *= base;
    k >>= 1;
    if (k) base *= base;
  }
  return out;
}

}  // namespace rode
