#pragma once

// Shared helpers for the test binaries: literals, seeded random objects and
// a brute-force ansatz oracle that does not go through ratsolve.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "rode/rode.hpp"

namespace rt {

using rode::DiffOp;
using rode::GaussianRational;
using rode::Poly;
using rode::RatFunc;
using rode::RatFuncMatrix;
using rode::RatVec;

inline GaussianRational q(long num, long den = 1) { return GaussianRational::fraction(num, den); }
inline GaussianRational qi(long re_num, long re_den, long im_num, long im_den) {
  return {mpq_class(re_num, re_den), mpq_class(im_num, im_den)};
}
inline Poly poly(std::vector<GaussianRational> c) { return Poly(std::move(c)); }
inline RatFunc rf(const std::string& text, const rode::SymbolTable& symbols = {}) {
  return rode::parse_expression(text, symbols);
}
inline DiffOp scalar_op(const std::vector<std::string>& coeffs, const rode::SymbolTable& symbols = {}) {
  std::vector<RatFunc> c;
  for (const auto& s : coeffs) c.push_back(rf(s, symbols));
  return DiffOp::scalar(c);
}

/// Deterministic generator for property tests.
class Random {
 public:
  explicit Random(std::uint32_t seed) : gen_(seed) {}

  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(gen_); }
  bool coin() { return integer(0, 1) == 1; }

  GaussianRational rational(long bound = 5, bool complex = true) {
    const mpq_class re(integer(-bound, bound), integer(1, bound));
    const mpq_class im = complex && coin() ? mpq_class(integer(-bound, bound), integer(1, bound)) : mpq_class(0);
    return {re, im};
  }
  GaussianRational nonzero_rational(long bound = 5, bool complex = true) {
    for (;;) {
      GaussianRational x = rational(bound, complex);
      if (!x.is_zero()) return x;
    }
  }
  Poly polynomial(int max_degree, long bound = 4) {
    std::vector<GaussianRational> c;
    const int d = static_cast<int>(integer(0, max_degree));
    for (int k = 0; k <= d; ++k) c.push_back(rational(bound, false));
    return Poly(std::move(c));
  }
  /// Rational function with poles drawn from `poles` and small numerator.
  RatFunc ratfunc(const std::vector<GaussianRational>& poles, int max_degree = 2, int max_pole_order = 2) {
    Poly den(1);
    for (const auto& p : poles) den = den * rode::pow(Poly::linear(p), static_cast<std::size_t>(integer(0, max_pole_order)));
    return RatFunc(polynomial(max_degree), den);
  }
  RatFuncMatrix matrix(std::size_t n, const std::vector<GaussianRational>& poles, int max_degree = 1) {
    RatFuncMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) m(i, k) = ratfunc(poles, max_degree, 1);
    return m;
  }
  /// Square operator of the given order whose top coefficient is invertible.
  DiffOp monic_like(std::size_t n, std::size_t order, const std::vector<GaussianRational>& poles) {
    std::vector<RatFuncMatrix> c;
    for (std::size_t k = 0; k < order; ++k) c.push_back(matrix(n, poles));
    RatFuncMatrix top = RatFuncMatrix::identity(n);
    if (coin()) top = top.scaled(RatFunc(Poly::linear(nonzero_rational(3, false))));
    c.push_back(top);
    return DiffOp(c);
  }

  std::mt19937& engine() { return gen_; }

 private:
  std::mt19937 gen_;
};

/// Outcome of the brute-force oracle.
struct OracleResult {
  bool consistent = false;
  std::size_t unknowns = 0;
  std::size_t rank = 0;
  std::vector<GaussianRational> particular;
  std::size_t kernel_dimension() const { return unknowns - rank; }
};

/// Plain row reduction kept apart from linsolve_exact.
namespace detail {

struct GaussInt {
  mpz_class re, im;
  bool is_zero() const { return re == 0 && im == 0; }
  std::size_t bits() const { return rode::detail::bits(re) + rode::detail::bits(im); }
};

// a * b - c * d, divided exactly by e.
inline GaussInt cross_divexact(const GaussInt& a, const GaussInt& b, const GaussInt& c, const GaussInt& d,
                               const GaussInt& e) {
  mpz_class re = a.re * b.re - a.im * b.im - (c.re * d.re - c.im * d.im);
  mpz_class im = a.re * b.im + a.im * b.re - (c.re * d.im + c.im * d.re);
  if (e.im == 0) {
    mpz_divexact(re.get_mpz_t(), re.get_mpz_t(), e.re.get_mpz_t());
    mpz_divexact(im.get_mpz_t(), im.get_mpz_t(), e.re.get_mpz_t());
    return {re, im};
  }
  const mpz_class norm = e.re * e.re + e.im * e.im;
  mpz_class out_re = re * e.re + im * e.im;
  mpz_class out_im = im * e.re - re * e.im;
  mpz_divexact(out_re.get_mpz_t(), out_re.get_mpz_t(), norm.get_mpz_t());
  mpz_divexact(out_im.get_mpz_t(), out_im.get_mpz_t(), norm.get_mpz_t());
  return {out_re, out_im};
}

}  // namespace detail

/// Fraction-free (Bareiss) row echelon form over Z[i], then back substitution.
inline OracleResult oracle_eliminate(const std::vector<std::vector<GaussianRational>>& input, std::size_t unknowns) {
  OracleResult out;
  out.unknowns = unknowns;
  std::vector<std::vector<detail::GaussInt>> rows;
  for (const auto& row : input) {
    mpz_class den = 1;
    for (const auto& x : row) {
      mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.re().get_den_mpz_t());
      mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.im().get_den_mpz_t());
    }
    std::vector<detail::GaussInt> scaled;
    for (const auto& x : row)
      scaled.push_back({x.re().get_num() * (den / x.re().get_den()), x.im().get_num() * (den / x.im().get_den())});
    rows.push_back(std::move(scaled));
  }
  std::vector<std::size_t> pivots;
  detail::GaussInt previous{1, 0};
  const detail::GaussInt zero{0, 0};
  std::size_t r = 0;
  for (std::size_t c = 0; c < unknowns && r < rows.size(); ++c) {
    std::size_t p = rows.size();
    for (std::size_t k = r; k < rows.size(); ++k)
      if (!rows[k][c].is_zero() && (p == rows.size() || rows[k][c].bits() < rows[p][c].bits())) p = k;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[r]);
    const detail::GaussInt pivot = rows[r][c];
    for (std::size_t k = r + 1; k < rows.size(); ++k) {
      const detail::GaussInt f = rows[k][c];
      for (std::size_t j = c + 1; j <= unknowns; ++j)
        rows[k][j] = detail::cross_divexact(pivot, rows[k][j], f.is_zero() ? zero : f, rows[r][j], previous);
      rows[k][c] = zero;
    }
    previous = pivot;
    pivots.push_back(c);
    ++r;
  }
  out.rank = r;
  for (std::size_t k = r; k < rows.size(); ++k)
    if (!rows[k][unknowns].is_zero()) return out;
  out.consistent = true;
  auto value = [](const detail::GaussInt& z) { return GaussianRational(mpq_class(z.re), mpq_class(z.im)); };
  out.particular.assign(unknowns, GaussianRational());
  for (std::size_t k = r; k-- > 0;) {
    GaussianRational x = value(rows[k][unknowns]);
    for (std::size_t j = pivots[k] + 1; j < unknowns; ++j)
      if (!rows[k][j].is_zero() && !out.particular[j].is_zero()) x -= value(rows[k][j]) * out.particular[j];
    out.particular[pivots[k]] = x / value(rows[k][pivots[k]]);
  }
  return out;
}

/// Partial-fraction basis: r^n for n in [lo, hi] and (r - rho)^-j for j in 1..J.
inline std::vector<RatFunc> partial_fraction_basis(std::int64_t lo, std::int64_t hi,
                                                   const std::vector<std::pair<GaussianRational, int>>& poles) {
  std::vector<RatFunc> out;
  for (std::int64_t n = lo; n <= hi; ++n) out.push_back(rode::pow(RatFunc::r(), n));
  for (const auto& [rho, order] : poles)
    for (int j = 1; j <= order; ++j) out.push_back(rode::pow(RatFunc(Poly::linear(rho)), -j));
  return out;
}

/// Sum_k C_k(x) u^(k)(x), computed pointwise from the coefficient matrices.
inline std::vector<GaussianRational> eval_apply(const DiffOp& e, const RatVec& u, const GaussianRational& x) {
  std::vector<GaussianRational> out(e.rows());
  for (std::size_t k = 0; k < e.size(); ++k) {
    const RatFuncMatrix ck = e.coeff(k);
    for (std::size_t j = 0; j < e.cols(); ++j) {
      if (u[j].is_zero()) continue;
      const GaussianRational uj = u[j].derivative(k).eval(x);
      for (std::size_t i = 0; i < e.rows(); ++i) {
        const RatFunc& c = ck(i, j);
        if (!c.is_zero()) out[i] += c.eval(x) * uj;
      }
    }
  }
  return out;
}

/// Solves e[u] = v over u_j in span(basis) by evaluation at sample points.
/// Inconsistency is conclusive; a consistent particular solution is checked
/// exactly by the caller through `assemble`.
inline OracleResult brute_force(const DiffOp& e, const RatVec& v, const std::vector<RatFunc>& basis,
                                std::size_t extra_samples = 12) {
  const std::size_t cols = e.cols();
  const std::size_t unknowns = cols * basis.size();
  const std::size_t samples = unknowns / e.rows() + extra_samples;
  std::vector<RatFuncMatrix> coeffs;
  for (std::size_t k = 0; k < e.size(); ++k) coeffs.push_back(e.coeff(k));
  std::vector<std::vector<RatFunc>> derivatives(basis.size());
  for (std::size_t b = 0; b < basis.size(); ++b)
    for (std::size_t k = 0; k < e.size(); ++k) derivatives[b].push_back(basis[b].derivative(k));
  std::vector<std::vector<GaussianRational>> rows;
  long next = 0;
  for (std::size_t s = 0; s < samples;) {
    ++next;
    const GaussianRational x = q(next + 1) + GaussianRational::i() * q(next % 3 - 1);
    bool regular = true;
    try {
      for (const auto& ck : coeffs)
        for (const auto& c : ck.entries()) (void)c.eval(x);
      for (const auto& b : basis) (void)b.eval(x);
      for (const auto& f : v) (void)f.eval(x);
    } catch (const rode::DivisionByZero&) {
      regular = false;
    }
    if (!regular) continue;
    std::vector<std::vector<GaussianRational>> block(e.rows(), std::vector<GaussianRational>(unknowns + 1));
    std::vector<rode::Matrix<GaussianRational>> cx;
    for (const auto& ck : coeffs) cx.push_back(ck.map([&](const RatFunc& c) { return c.eval(x); }));
    for (std::size_t b = 0; b < basis.size(); ++b)
      for (std::size_t k = 0; k < coeffs.size(); ++k) {
        const GaussianRational dk = derivatives[b][k].eval(x);
        if (dk.is_zero()) continue;
        for (std::size_t j = 0; j < cols; ++j)
          for (std::size_t i = 0; i < e.rows(); ++i) block[i][j * basis.size() + b] += cx[k](i, j) * dk;
      }
    for (std::size_t i = 0; i < e.rows(); ++i) {
      block[i][unknowns] = v[i].eval(x);
      rows.push_back(std::move(block[i]));
    }
    ++s;
  }
  return oracle_eliminate(rows, unknowns);
}

inline RatVec assemble(const std::vector<GaussianRational>& coeffs, const std::vector<RatFunc>& basis, std::size_t cols) {
  RatVec u(cols);
  for (std::size_t j = 0; j < cols; ++j)
    for (std::size_t b = 0; b < basis.size(); ++b) u[j] += RatFunc(coeffs[j * basis.size() + b]) * basis[b];
  return u;
}

inline bool is_zero(const RatVec& v) {
  for (const auto& f : v)
    if (!f.is_zero()) return false;
  return true;
}

inline RatVec sub(const RatVec& a, const RatVec& b) {
  RatVec out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] - b[k];
  return out;
}

/// Does u lie in particular + span(kernel)? Decided by exact linear algebra
/// on sampled values, then confirmed exactly.
inline bool in_affine_span(const RatVec& u, const RatVec& particular, const std::vector<RatVec>& kernel) {
  const RatVec target = sub(u, particular);
  if (kernel.empty()) return is_zero(target);
  std::vector<std::vector<GaussianRational>> rows;
  const std::size_t samples = kernel.size() + 6;
  long next = 0;
  for (std::size_t s = 0; s < samples;) {
    const GaussianRational x = GaussianRational::fraction(13 * ++next + 5, 7);
    try {
      for (std::size_t i = 0; i < u.size(); ++i) {
        std::vector<GaussianRational> row;
        for (const auto& k : kernel) row.push_back(k[i].eval(x));
        row.push_back(target[i].eval(x));
        rows.push_back(std::move(row));
      }
      ++s;
    } catch (const rode::DivisionByZero&) {
    }
  }
  const OracleResult res = oracle_eliminate(std::move(rows), kernel.size());
  if (!res.consistent) return false;
  RatVec combo(u.size());
  for (std::size_t k = 0; k < kernel.size(); ++k)
    for (std::size_t i = 0; i < u.size(); ++i) combo[i] += RatFunc(res.particular[k]) * kernel[k][i];
  return is_zero(sub(target, combo));
}


/// Widened brute-force search for (delta0, delta1) solving the decoupling
/// system: powers of r from lower - |m+1| - 3 to upper + |m+1| + 3 and poles
/// at 2M up to order max(0, -(m+1)) + 3.
inline OracleResult rw_oracle(const rode::RWDelta& d, const GaussianRational& s0, const GaussianRational& s1,
                              const rode::RWParams& p, std::vector<RatFunc>* basis_out = nullptr) {
  const rode::RWBounds b = rode::rw_bounds(d, s0, s1, p);
  const std::int64_t shift = b.m + 1 < 0 ? -(b.m + 1) : b.m + 1;
  const int horizon_order = static_cast<int>(std::max<std::int64_t>(0, -(b.m + 1)) + 3);
  const auto basis = partial_fraction_basis(std::min(b.lower, b.upper) - shift - 3, std::max(b.lower, b.upper) + shift + 3,
                                            {{p.horizon(), horizon_order}});
  if (basis_out) *basis_out = basis;
  return brute_force(rode::rw_decoupling_system(s0, s1, p), {d.Delta0, d.Delta1}, basis);
}

}  // namespace rt
