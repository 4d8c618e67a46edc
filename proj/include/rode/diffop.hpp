#pragma once

#include <cstddef>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "rode/error.hpp"
#include "rode/laurent.hpp"
#include "rode/matrix.hpp"
#include "rode/poly.hpp"
#include "rode/ratfunc.hpp"

namespace rode {

namespace detail {
inline GaussianRational binomial(std::size_t n, std::size_t k) {
  mpz_class b;
  mpz_bin_uiui(b.get_mpz_t(), n, k);
  return mpq_class(b);
}
}  // namespace detail

/// Matrix linear differential operator sum_k C_k(r) d^k/dr^k, coefficient
/// matrices to the left of the derivatives. The zero operator has no
/// coefficients and order -inf.
class DiffOp {
 public:
  DiffOp() = default;
  DiffOp(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}
  explicit DiffOp(std::vector<RatFuncMatrix> coeffs) {
    if (coeffs.empty()) throw DimensionMismatch("DiffOp needs at least one coefficient to know its shape");
    rows_ = coeffs.front().rows();
    cols_ = coeffs.front().cols();
    for (const auto& c : coeffs)
      if (c.rows() != rows_ || c.cols() != cols_) throw DimensionMismatch("DiffOp coefficients differ in shape");
    c_ = std::move(coeffs);
    trim();
  }
  DiffOp(std::size_t rows, std::size_t cols, std::vector<RatFuncMatrix> coeffs) : rows_(rows), cols_(cols) {
    for (const auto& c : coeffs)
      if (c.rows() != rows_ || c.cols() != cols_) throw DimensionMismatch("DiffOp coefficients differ in shape");
    c_ = std::move(coeffs);
    trim();
  }

  static DiffOp identity(std::size_t n) { return multiplication(RatFuncMatrix::identity(n)); }
  /// d^k/dr^k acting on n-vectors.
  static DiffOp derivative(std::size_t n, std::size_t k = 1) {
    std::vector<RatFuncMatrix> c(k + 1, RatFuncMatrix(n, n));
    c[k] = RatFuncMatrix::identity(n);
    return DiffOp(n, n, std::move(c));
  }
  static DiffOp multiplication(const RatFuncMatrix& m) { return DiffOp(m.rows(), m.cols(), {m}); }
  /// Scalar operator sum_k c[k] d^k.
  static DiffOp scalar(const std::vector<RatFunc>& c) {
    std::vector<RatFuncMatrix> m;
    for (const auto& x : c) m.push_back(RatFuncMatrix(1, 1, {x}));
    return DiffOp(1, 1, std::move(m));
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }
  bool is_zero() const { return c_.empty(); }
  /// Differential order, -inf for the zero operator.
  Order order() const { return c_.empty() ? Order::minus_infinity() : Order(static_cast<std::int64_t>(c_.size()) - 1); }
  /// Number of stored coefficients (order + 1, 0 for zero).
  std::size_t size() const { return c_.size(); }
  const std::vector<RatFuncMatrix>& coeffs() const { return c_; }
  RatFuncMatrix coeff(std::size_t k) const { return k < c_.size() ? c_[k] : RatFuncMatrix(rows_, cols_); }

  DiffOp& operator+=(const DiffOp& o) {
    check_same(o);
    if (c_.size() < o.c_.size()) c_.resize(o.c_.size(), RatFuncMatrix(rows_, cols_));
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    trim();
    return *this;
  }
  DiffOp& operator-=(const DiffOp& o) { return *this += -o; }
  friend DiffOp operator+(DiffOp a, const DiffOp& b) { return a += b; }
  friend DiffOp operator-(DiffOp a, const DiffOp& b) { return a -= b; }
  DiffOp operator-() const {
    DiffOp out = *this;
    for (auto& c : out.c_) c = -c;
    return out;
  }
  friend bool operator==(const DiffOp& a, const DiffOp& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.c_ == b.c_;
  }

  /// M * (this), i.e. every coefficient multiplied on the left.
  DiffOp left_multiplied(const RatFuncMatrix& m) const {
    if (m.cols() != rows_) throw DimensionMismatch("left multiplication shape mismatch");
    std::vector<RatFuncMatrix> out;
    for (const auto& c : c_) out.push_back(m * c);
    return DiffOp(m.rows(), cols_, std::move(out));
  }

  std::string to_string() const {
    if (c_.empty()) return "0";
    std::string out;
    for (std::size_t k = c_.size(); k-- > 0;) {
      if (c_[k].is_zero()) continue;
      if (!out.empty()) out += " + ";
      out += (rows_ == 1 && cols_ == 1) ? "(" + c_[k](0, 0).to_string() + ")" : c_[k].to_string();
      if (k == 1) out += " d";
      if (k > 1) out += " d^" + std::to_string(k);
    }
    return out;
  }
  friend std::ostream& operator<<(std::ostream& os, const DiffOp& e) { return os << e.to_string(); }

 private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }
  void check_same(const DiffOp& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionMismatch("operator sum shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<RatFuncMatrix> c_;
};

/// e[u] with exact differentiation.
inline RatVec apply(const DiffOp& e, const RatVec& u) {
  if (u.size() != e.cols()) throw DimensionMismatch("apply: operator has " + std::to_string(e.cols()) +
                                                    " columns, vector has " + std::to_string(u.size()) + " entries");
  RatVec out(e.rows());
  RatVec du = u;
  for (std::size_t k = 0; k < e.size(); ++k) {
    if (k > 0)
      for (auto& x : du) x = x.derivative();
    const auto term = e.coeffs()[k] * du;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += term[i];
  }
  return out;
}

/// e o f, normalized by the Leibniz rule d^i B = sum_m C(i,m) B^(i-m) d^m.
inline DiffOp compose(const DiffOp& e, const DiffOp& f) {
  if (e.cols() != f.rows()) throw DimensionMismatch("compose: inner dimensions differ");
  if (e.is_zero() || f.is_zero()) return DiffOp(e.rows(), f.cols());
  std::vector<RatFuncMatrix> out(e.size() + f.size() - 1, RatFuncMatrix(e.rows(), f.cols()));
  for (std::size_t j = 0; j < f.size(); ++j) {
    RatFuncMatrix deriv = f.coeffs()[j];  // B_j^(i-m), advanced as i-m grows
    std::vector<RatFuncMatrix> derivs{deriv};
    for (std::size_t k = 1; k < e.size(); ++k) derivs.push_back(derivs.back().map([](const RatFunc& x) { return x.derivative(); }));
    for (std::size_t i = 0; i < e.size(); ++i) {
      const auto& a = e.coeffs()[i];
      if (a.is_zero()) continue;
      for (std::size_t m = 0; m <= i; ++m) {
        const auto& b = derivs[i - m];
        if (b.is_zero()) continue;
        out[m + j] += (a * b).scaled(RatFunc(detail::binomial(i, m)));
      }
    }
  }
  return DiffOp(e.rows(), f.cols(), std::move(out));
}

/// P * e = d^p + tail with ord(tail) < p.
struct MonicForm {
  RatFuncMatrix P;
  DiffOp tail;
};

inline MonicForm monic_normalize(const DiffOp& e) {
  if (!e.is_square()) throw NotMonicNormalizable("operator is not square");
  if (e.is_zero()) throw NotMonicNormalizable("zero operator");
  const std::size_t p = e.size() - 1;
  RatFuncMatrix P;
  try {
    P = inverse(e.coeffs()[p]);
  } catch (const DivisionByZero&) {
    throw NotMonicNormalizable("leading coefficient is singular; the equation is not solvable for its highest derivatives");
  }
  std::vector<RatFuncMatrix> tail;
  for (std::size_t k = 0; k < p; ++k) tail.push_back(P * e.coeffs()[k]);
  return {P, DiffOp(e.rows(), e.cols(), std::move(tail))};
}

/// f = remainder + quotient o e, ord(remainder) < ord(e).
struct Division {
  DiffOp remainder;
  DiffOp quotient;
};

/// Right division. The top derivative d^(p+k) of f is rewritten through
/// d^k o (P e) = d^(p+k) + lower, one order at a time.
inline Division right_divide(const DiffOp& f, const DiffOp& e) {
  if (f.cols() != e.rows()) throw DimensionMismatch("right_divide: shapes do not match");
  const auto [P, tail] = monic_normalize(e);
  const std::size_t p = e.size() - 1;
  DiffOp rem = f;
  DiffOp quot(f.rows(), e.rows());
  if (p == 0) {
    // order-0 e is invertible: f = (f P) o e
    return {DiffOp(f.rows(), f.cols()), compose(f, DiffOp::multiplication(P))};
  }
  const DiffOp monic = e.left_multiplied(P);
  std::vector<DiffOp> shifted{monic};  // d^k o (P e)
  const DiffOp d = DiffOp::derivative(e.rows());
  while (!rem.is_zero() && rem.size() - 1 >= p) {
    const std::size_t k = rem.size() - 1 - p;
    while (shifted.size() <= k) shifted.push_back(compose(d, shifted.back()));
    const RatFuncMatrix top = rem.coeffs().back();
    rem -= shifted[k].left_multiplied(top);
    std::vector<RatFuncMatrix> qk(k + 1, RatFuncMatrix(f.rows(), e.rows()));
    qk[k] = top;
    quot += compose(DiffOp(f.rows(), e.rows(), std::move(qk)), DiffOp::multiplication(P));
  }
  return {rem, quot};
}

/// Action of an operator on S c (r-rho)^n for symbolic n, stored in the
/// falling-factorial basis: M(r, n) = sum_j n(n-1)...(n-j+1) B_j(r), so
/// e[S c (r-rho)^n] = M(r, n) c (r-rho)^n. At infinity (r-rho) is r.
struct PowerAction {
  ExpansionPoint point = ExpansionPoint::finite(0);
  std::vector<RatFuncMatrix> basis;  ///< B_j

  std::size_t rows() const { return basis.empty() ? 0 : basis.front().rows(); }
  std::size_t cols() const { return basis.empty() ? 0 : basis.front().cols(); }

  /// M(r, n) at an integer n.
  RatFuncMatrix at(std::int64_t n) const {
    RatFuncMatrix out(rows(), cols());
    GaussianRational falling(1);
    for (std::size_t j = 0; j < basis.size(); ++j) {
      if (!falling.is_zero()) out += basis[j].scaled(RatFunc(falling));
      falling *= GaussianRational(n - static_cast<std::int64_t>(j));
    }
    return out;
  }

  PowerAction left_multiplied(const RatFuncMatrix& m) const {
    PowerAction out{point, {}};
    for (const auto& b : basis) out.basis.push_back(m * b);
    return out;
  }
};

/// n(n-1)...(n-j+1) as a polynomial in n.
inline Poly falling_factorial(std::size_t j) {
  Poly out(GaussianRational(1), Var::n);
  for (std::size_t k = 0; k < j; ++k) out *= Poly({GaussianRational(-static_cast<long>(k)), GaussianRational(1)}, Var::n);
  return out;
}

inline PowerAction apply_to_power(const DiffOp& e, const RatFuncMatrix& S, const ExpansionPoint& point) {
  if (S.rows() != e.cols()) throw DimensionMismatch("apply_to_power: S does not fit the operator");
  PowerAction out{point, {}};
  const std::size_t p = e.size();
  if (p == 0) {
    out.basis.push_back(RatFuncMatrix(e.rows(), S.cols()));
    return out;
  }
  std::vector<RatFuncMatrix> sd{S};
  for (std::size_t k = 1; k < p; ++k) sd.push_back(sd.back().map([](const RatFunc& x) { return x.derivative(); }));
  const RatFunc inv_t = point.local_variable().inverse();
  RatFunc inv_t_pow(1);
  for (std::size_t j = 0; j < p; ++j) {
    RatFuncMatrix acc(e.rows(), S.cols());
    for (std::size_t k = j; k < p; ++k) {
      const auto& c = e.coeffs()[k];
      if (c.is_zero() || sd[k - j].is_zero()) continue;
      acc += (c * sd[k - j]).scaled(RatFunc(detail::binomial(k, j)));
    }
    out.basis.push_back(acc.scaled(inv_t_pow));
    inv_t_pow *= inv_t;
  }
  return out;
}

}  // namespace rode
