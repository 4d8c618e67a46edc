#pragma once

#include <cctype>
#include <map>
#include <string>
#include <string_view>

#include "rode/error.hpp"
#include "rode/gaussian_rational.hpp"
#include "rode/ratfunc.hpp"

namespace rode {

/// Named constants and functions available to parse_expression. The
/// variable r and the imaginary unit i are always defined.
using SymbolTable = std::map<std::string, RatFunc, std::less<>>;

namespace detail {

/// expr := term (('+'|'-') term)*, term := unary (('*'|'/') unary)*,
/// unary := ('+'|'-') unary | power, power := atom ('^' unary)?,
/// atom := integer | name | '(' expr ')'.
class ExprParser {
 public:
  ExprParser(std::string_view text, const SymbolTable& symbols) : s_(text), symbols_(symbols) {}

  RatFunc parse() {
    RatFunc v = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("expression '" + std::string(s_) + "' at offset " + std::to_string(pos_) + ": " + msg);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  RatFunc expr() {
    RatFunc v = term();
    for (;;) {
      if (accept('+'))
        v += term();
      else if (accept('-'))
        v -= term();
      else
        return v;
    }
  }
  RatFunc term() {
    RatFunc v = unary();
    for (;;) {
      if (accept('*')) {
        v *= unary();
      } else if (accept('/')) {
        const RatFunc d = unary();
        if (d.is_zero()) fail("division by zero");
        v /= d;
      } else {
        return v;
      }
    }
  }
  RatFunc unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }
  RatFunc power() {
    RatFunc base = atom();
    if (!accept('^')) return base;
    const RatFunc e = unary();
    if (!e.is_constant() || !e.constant_value().is_integer()) fail("exponent must be an integer");
    const mpz_class k = e.constant_value().re().get_num();
    if (!k.fits_slong_p()) fail("exponent out of range");
    if (k < 0 && base.is_zero()) fail("zero to a negative power");
    return pow(base, k.get_si());
  }
  RatFunc atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    const char c = s_[pos_];
    if (accept('(')) {
      RatFunc v = expr();
      if (!accept(')')) fail("missing ')'");
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return RatFunc(GaussianRational(mpq_class(std::string(s_.substr(start, pos_ - start)))));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      const std::string_view name = s_.substr(start, pos_ - start);
      if (name == "r") return RatFunc::r();
      if (name == "i") return RatFunc(GaussianRational::i());
      if (auto it = symbols_.find(name); it != symbols_.end()) return it->second;
      pos_ = start;
      fail("unknown symbol '" + std::string(name) + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view s_;
  const SymbolTable& symbols_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses an arithmetic expression in r with exact constants, e.g.
/// "-4*i*f*(6*f*f1 + A)*r*omega".
inline RatFunc parse_expression(std::string_view text, const SymbolTable& symbols = {}) {
  return detail::ExprParser(text, symbols).parse();
}

}  // namespace rode
