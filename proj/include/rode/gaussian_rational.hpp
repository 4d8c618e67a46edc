#pragma once

#include <gmpxx.h>

#include <compare>
#include <concepts>
#include <cstddef>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>

#include "rode/error.hpp"

namespace rode {

namespace detail {

inline mpq_class parse_rational(std::string_view text) {
  if (text.empty()) throw ParseError("empty rational literal");
  std::string s(text);
  if (s.front() == '+') s.erase(0, 1);
  if (s.empty()) throw ParseError("empty rational literal");
  std::size_t slashes = 0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const char c = s[k];
    if (c == '/') {
      ++slashes;
    } else if (c == '-') {
      if (k != 0) throw ParseError("bad rational literal '" + std::string(text) + "'");
    } else if (c < '0' || c > '9') {
      throw ParseError("bad rational literal '" + std::string(text) + "'");
    }
  }
  if (slashes > 1 || s.back() == '/' || s.front() == '/' || s == "-")
    throw ParseError("bad rational literal '" + std::string(text) + "'");
  mpq_class q;
  if (q.set_str(s, 10) != 0) throw ParseError("bad rational literal '" + std::string(text) + "'");
  if (q.get_den() == 0) throw DivisionByZero("zero denominator in '" + std::string(text) + "'");
  q.canonicalize();
  return q;
}

inline std::size_t bits(const mpz_class& z) { return z == 0 ? 0 : mpz_sizeinbase(z.get_mpz_t(), 2); }

}  // namespace detail

/// Exact element of Q(i). Both parts are kept in canonical GMP form, so
/// equality is structural.
class GaussianRational {
 public:
  GaussianRational() = default;
  template <std::integral I>
  GaussianRational(I value) : re_(static_cast<long>(value)) {}  // NOLINT(implicit)
  GaussianRational(mpq_class re) : re_(std::move(re)) { re_.canonicalize(); }  // NOLINT(implicit)
  GaussianRational(mpq_class re, mpq_class im) : re_(std::move(re)), im_(std::move(im)) {
    re_.canonicalize();
    im_.canonicalize();
  }

  static GaussianRational i() { return {mpq_class(0), mpq_class(1)}; }
  static GaussianRational fraction(long num, long den) {
    if (den == 0) throw DivisionByZero();
    return mpq_class(num, den);
  }

  const mpq_class& re() const { return re_; }
  const mpq_class& im() const { return im_; }

  bool is_zero() const { return re_ == 0 && im_ == 0; }
  bool is_real() const { return im_ == 0; }
  bool is_integer() const { return im_ == 0 && re_.get_den() == 1; }

  GaussianRational conj() const { return {re_, -im_}; }
  mpq_class norm() const { return re_ * re_ + im_ * im_; }

  GaussianRational inverse() const {
    if (is_zero()) throw DivisionByZero();
    const mpq_class n = norm();
    return {re_ / n, -im_ / n};
  }

  GaussianRational& operator+=(const GaussianRational& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  GaussianRational& operator-=(const GaussianRational& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  GaussianRational& operator*=(const GaussianRational& o) {
    mpq_class re = re_ * o.re_ - im_ * o.im_;
    mpq_class im = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(re);
    im_ = std::move(im);
    return *this;
  }
  GaussianRational& operator/=(const GaussianRational& o) { return *this *= o.inverse(); }

  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
  friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
  friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
  GaussianRational operator-() const { return {-re_, -im_}; }

  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }

  /// Lexicographic on (re, im); only used to order sets of points.
  friend std::strong_ordering operator<=>(const GaussianRational& a, const GaussianRational& b) {
    const int c = cmp(a.re_, b.re_);
    if (c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
    const int d = cmp(a.im_, b.im_);
    if (d != 0) return d < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  /// Bit size of the numerators, used as a pivoting heuristic.
  std::size_t bit_size() const {
    return detail::bits(re_.get_num()) + detail::bits(im_.get_num());
  }

  /// "p/q", or "p/q+p'/q'i" when the imaginary part is nonzero. Integers
  /// drop the "/1".
  std::string to_string() const {
    if (im_ == 0) return re_.get_str();
    std::string out = re_.get_str();
    out += im_ < 0 ? '-' : '+';
    out += mpq_class(abs(im_)).get_str();
    out += 'i';
    return out;
  }

  /// Accepts the output of to_string() and the shorthands "i", "-i",
  /// "3i", "1/2i".
  static GaussianRational parse(std::string_view text) {
    std::string s;
    for (char c : text)
      if (c != ' ' && c != '\t') s += c;
    if (s.empty()) throw ParseError("empty Gaussian rational literal");
    if (s.back() != 'i') return detail::parse_rational(s);
    s.pop_back();
    std::size_t split = std::string::npos;
    for (std::size_t k = s.size(); k-- > 1;) {
      if (s[k] == '+' || s[k] == '-') {
        split = k;
        break;
      }
    }
    std::string re_part = split == std::string::npos ? "" : s.substr(0, split);
    std::string im_part = split == std::string::npos ? s : s.substr(split);
    if (im_part.empty() || im_part == "+") im_part = "1";
    if (im_part == "-") im_part = "-1";
    const mpq_class re = re_part.empty() ? mpq_class(0) : detail::parse_rational(re_part);
    return {re, detail::parse_rational(im_part)};
  }

  friend std::ostream& operator<<(std::ostream& os, const GaussianRational& q) {
    return os << q.to_string();
  }

 private:
  mpq_class re_{0};
  mpq_class im_{0};
};

}  // namespace rode
