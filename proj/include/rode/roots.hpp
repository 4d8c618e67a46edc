#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "rode/error.hpp"
#include "rode/gaussian_rational.hpp"
#include "rode/poly.hpp"

namespace rode {

namespace detail {

/// Trial division; a leftover cofactor must be a probable prime.
inline std::vector<std::pair<mpz_class, int>> factor_integer(mpz_class n) {
  std::vector<std::pair<mpz_class, int>> out;
  if (n < 0) n = -n;
  if (n <= 1) return out;
  auto take = [&](const mpz_class& p) {
    int e = 0;
    while (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) {
      n /= p;
      ++e;
    }
    if (e) out.emplace_back(p, e);
  };
  take(2);
  for (mpz_class p = 3; p * p <= n; p += 2) {
    if (p > 10'000'000) break;
    take(p);
  }
  if (n > 1) {
    if (mpz_probab_prime_p(n.get_mpz_t(), 30) == 0)
      throw UnsupportedSingularity("coefficient too large to factor: " + n.get_str());
    out.emplace_back(n, 1);
  }
  return out;
}

inline std::vector<mpz_class> positive_divisors(const mpz_class& n) {
  std::vector<mpz_class> divs{1};
  for (const auto& [p, e] : factor_integer(n)) {
    const std::size_t base = divs.size();
    mpz_class pk = 1;
    for (int k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t j = 0; j < base; ++j) divs.push_back(divs[j] * pk);
    }
  }
  std::sort(divs.begin(), divs.end());
  return divs;
}

struct GaussInt {
  mpz_class re, im;

  mpz_class norm() const { return re * re + im * im; }
  friend GaussInt operator*(const GaussInt& a, const GaussInt& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  bool divides(const GaussInt& a) const {
    const mpz_class n = norm();
    const GaussInt t = a * GaussInt{re, -im};
    return mpz_divisible_p(t.re.get_mpz_t(), n.get_mpz_t()) && mpz_divisible_p(t.im.get_mpz_t(), n.get_mpz_t());
  }
  GaussInt divexact(const GaussInt& d) const {
    const mpz_class n = d.norm();
    const GaussInt t = *this * GaussInt{d.re, -d.im};
    return {t.re / n, t.im / n};
  }
};

/// All divisors of a nonzero Gaussian integer, unit multiples included.
inline std::vector<GaussInt> gaussian_divisors(const GaussInt& g) {
  // Gaussian primes above each rational prime dividing the norm.
  std::vector<GaussInt> primes;
  for (const auto& [p, e] : factor_integer(g.norm())) {
    (void)e;
    if (p == 2) {
      primes.push_back({1, 1});
    } else if (mpz_class(p % 4) == 3) {
      primes.push_back({p, 0});
    } else {
      mpz_class x = 1;
      for (;; ++x) {
        const mpz_class y2 = p - x * x;
        if (y2 <= 0) throw InternalError("no two-square decomposition");
        if (mpz_perfect_square_p(y2.get_mpz_t())) {
          mpz_class y;
          mpz_sqrt(y.get_mpz_t(), y2.get_mpz_t());
          primes.push_back({x, y});
          primes.push_back({x, -y});
          break;
        }
      }
    }
  }
  std::vector<GaussInt> divs{{1, 0}};
  for (const auto& pi : primes) {
    int e = 0;
    GaussInt rest = g;
    while (pi.divides(rest)) {
      rest = rest.divexact(pi);
      ++e;
    }
    const std::size_t base = divs.size();
    GaussInt pk{1, 0};
    for (int k = 1; k <= e; ++k) {
      pk = pk * pi;
      for (std::size_t j = 0; j < base; ++j) divs.push_back(divs[j] * pk);
    }
  }
  std::vector<GaussInt> out;
  const GaussInt units[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  for (const auto& d : divs)
    for (const auto& u : units) out.push_back(d * u);
  return out;
}

inline mpz_class lcm_of_denominators(const Poly& p) {
  mpz_class l = 1;
  for (const auto& c : p.coeffs()) {
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.re().get_den_mpz_t());
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.im().get_den_mpz_t());
  }
  return l;
}

inline GaussInt to_gauss_int(const GaussianRational& c) { return {c.re().get_num(), c.im().get_num()}; }

/// Exact square root in Q(i), if it exists.
inline std::optional<GaussianRational> gaussian_sqrt(const GaussianRational& z) {
  auto rational_sqrt = [](const mpq_class& q) -> std::optional<mpq_class> {
    if (q < 0) return std::nullopt;
    if (!mpz_perfect_square_p(q.get_num_mpz_t()) || !mpz_perfect_square_p(q.get_den_mpz_t())) return std::nullopt;
    mpz_class a, b;
    mpz_sqrt(a.get_mpz_t(), q.get_num_mpz_t());
    mpz_sqrt(b.get_mpz_t(), q.get_den_mpz_t());
    return mpq_class(a, b);
  };
  if (z.is_zero()) return GaussianRational();
  const auto modulus = rational_sqrt(z.norm());
  if (!modulus) return std::nullopt;
  const auto x = rational_sqrt((z.re() + *modulus) / 2);
  if (!x) return std::nullopt;
  if (*x != 0) return GaussianRational(*x, z.im() / (2 * *x));
  const auto y = rational_sqrt((*modulus - z.re()) / 2);
  if (!y) return std::nullopt;
  return GaussianRational(0, *y);
}

/// One root in Q(i) of a squarefree polynomial of degree >= 1, if any.
inline std::optional<GaussianRational> find_gaussian_root(const Poly& q) {
  if (q.degree() == 1) return -q.coeff(0) / q.coeff(1);
  if (q.coeff(0).is_zero()) return GaussianRational();
  if (q.degree() == 2) {
    const auto& a = q.coeff(2);
    const auto& b = q.coeff(1);
    const auto& c = q.coeff(0);
    const auto s = gaussian_sqrt(b * b - GaussianRational(4) * a * c);
    if (!s) return std::nullopt;
    return (-b + *s) / (GaussianRational(2) * a);
  }
  const Poly integral = q.scaled(GaussianRational(mpq_class(lcm_of_denominators(q))));
  const auto nums = gaussian_divisors(to_gauss_int(integral.coeff(0)));
  auto dens = gaussian_divisors(to_gauss_int(integral.lc()));
  // Associates give the same candidate set once numerators range over units.
  std::vector<GaussInt> den_reps;
  for (const auto& d : dens)
    if (d.re > 0 && d.im >= 0) den_reps.push_back(d);
  for (const auto& b : den_reps)
    for (const auto& a : nums) {
      const GaussianRational z = GaussianRational(mpq_class(a.re), mpq_class(a.im)) /
                                 GaussianRational(mpq_class(b.re), mpq_class(b.im));
      if (q.eval(z).is_zero()) return z;
    }
  return std::nullopt;
}

}  // namespace detail

/// Roots of a polynomial that lie in Q(i), plus the leftover factor with no
/// such roots.
struct RootSplit {
  std::vector<GaussianRational> roots;  ///< distinct, sorted
  Poly unresolved;                      ///< monic; constant 1 when fully split
};

inline RootSplit gaussian_rational_roots(const Poly& p) {
  if (p.is_zero()) throw PreconditionViolation("roots of the zero polynomial");
  RootSplit out;
  Poly q = p.monic();
  if (q.degree() > 0) q = q.exact_div(gcd(q, q.derivative())).monic();
  while (q.degree() > 0) {
    const auto root = detail::find_gaussian_root(q);
    if (!root) break;
    out.roots.push_back(*root);
    q = q.exact_div(Poly::linear(*root, q.var())).monic();
  }
  std::sort(out.roots.begin(), out.roots.end());
  out.unresolved = q;
  return out;
}

/// Sorted integer roots of a nonzero polynomial with Q(i) coefficients.
inline std::vector<std::int64_t> integer_roots(const Poly& p) {
  if (p.is_zero()) throw PreconditionViolation("integer roots of the zero polynomial");
  // An integer root annihilates the real and imaginary parts separately.
  std::vector<GaussianRational> re, im;
  for (const auto& c : p.coeffs()) {
    re.emplace_back(c.re());
    im.emplace_back(c.im());
  }
  Poly part(re, p.var());
  if (part.is_zero()) part = Poly(im, p.var());
  part = part.scaled(GaussianRational(mpq_class(detail::lcm_of_denominators(part))));

  std::vector<std::int64_t> out;
  const std::size_t low = part.low_degree();
  if (low > 0 && p.eval(GaussianRational(0)).is_zero()) out.push_back(0);
  const mpz_class a0 = part.coeff(low).re().get_num();
  for (const auto& d : detail::positive_divisors(a0)) {
    if (!d.fits_slong_p()) continue;
    for (long k : {d.get_si(), -d.get_si()})
      if (p.eval(GaussianRational(k)).is_zero()) out.push_back(k);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace rode
