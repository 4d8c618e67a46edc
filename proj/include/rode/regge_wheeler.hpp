#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rode/diffop.hpp"
#include "rode/error.hpp"
#include "rode/expr.hpp"
#include "rode/laurent.hpp"
#include "rode/ratsolve.hpp"
#include "rode/triangular.hpp"

namespace rode {

/// Background and mode parameters. A is the auxiliary constant of the
/// Example 4 and 5 sources, passed through unchanged.
struct RWParams {
  GaussianRational M = 1;
  GaussianRational omega = 1;
  std::int64_t l = 2;
  GaussianRational A = 1;

  void validate() const {
    if (M.is_zero()) throw PreconditionViolation("M must be nonzero");
    if (omega.is_zero()) throw PreconditionViolation("omega must be nonzero");
    if (l < 0) throw PreconditionViolation("l must be non-negative");
  }

  GaussianRational B() const { return GaussianRational(l * (l + 1)); }
  /// f = 1 - 2M/r
  RatFunc f() const { return RatFunc(Poly(std::vector<GaussianRational>{-GaussianRational(2) * M, 1}), Poly::x()); }
  /// f1 = 2M/r
  RatFunc f1() const { return RatFunc(Poly(GaussianRational(2) * M), Poly::x()); }
  GaussianRational horizon() const { return GaussianRational(2) * M; }
};

/// Symbols for Delta and delta expressions: f, f1, M, omega, l, B, A.
inline SymbolTable rw_symbols(const RWParams& p) {
  return {{"f", p.f()},
          {"f1", p.f1()},
          {"M", RatFunc(p.M)},
          {"omega", RatFunc(p.omega)},
          {"l", RatFunc(GaussianRational(p.l))},
          {"B", RatFunc(p.B())},
          {"A", RatFunc(p.A)}};
}

/// D_s = d f d - r^-2 [B + (1 - s^2) f1] + omega^2 / f.
inline DiffOp regge_wheeler(const GaussianRational& s, const RWParams& p) {
  p.validate();
  const RatFunc r = RatFunc::r();
  const RatFunc f = p.f();
  const RatFunc c0 = -(RatFunc(p.B()) + RatFunc(GaussianRational(1) - s * s) * p.f1()) / (r * r) +
                     RatFunc(p.omega * p.omega) / f;
  return DiffOp::scalar({c0, f.derivative(), f});
}

/// Delta = (Delta1 r d + Delta0) / r^2.
struct RWDelta {
  RatFunc Delta0;
  RatFunc Delta1;

  DiffOp to_operator() const {
    const RatFunc r = RatFunc::r();
    return DiffOp::scalar({Delta0 / (r * r), Delta1 / r});
  }
  static RWDelta from_operator(const DiffOp& op) {
    if (op.rows() != 1 || op.cols() != 1) throw DimensionMismatch("Delta must be scalar");
    if (op.size() > 2) throw PreconditionViolation("Delta must have differential order at most 1");
    const RatFunc r = RatFunc::r();
    return {op.coeff(0)(0, 0) * r * r, op.coeff(1)(0, 0) * r};
  }
};

/// The 2x2 system e [delta0, delta1] = [Delta0, Delta1] for
/// delta = delta1 r d + delta0.
inline DiffOp rw_decoupling_system(const GaussianRational& s0, const GaussianRational& s1, const RWParams& p) {
  p.validate();
  const RatFunc r = RatFunc::r();
  const RatFunc f = p.f();
  const RatFunc f1 = p.f1();
  const RatFunc B(p.B());
  const RatFunc w2(p.omega * p.omega);
  const RatFunc ds(s0 * s0 - s1 * s1);
  const RatFunc one_s1(GaussianRational(1) - s1 * s1);
  const RatFunc two(2);

  RatFuncMatrix c2{{f * r * r, RatFunc()}, {RatFunc(), f * r * r}};
  RatFuncMatrix c1{{f1 * r, (-two * w2 * r * r / f + two * (B + f1 * one_s1)) * r}, {two * f * r, (two * f - f1) * r}};
  RatFuncMatrix c0{{f1 * ds, -two * w2 * r * r * (f - f1) / (f * f) - (f1 / f) * (B + one_s1)},
                   {RatFunc(), f1 * (ds + RatFunc(1) / f)}};
  return DiffOp(2, 2, {c0, c1, c2});
}

/// Generic decoupling system of (D_s0, D_s1, Delta) rewritten for the
/// unknowns (delta0, delta1): diag(r^2, r) o e_generic o diag(1, r).
inline DecouplingSystem rw_generic_decoupling(const GaussianRational& s0, const GaussianRational& s1, const RWParams& p,
                                              const RWDelta& delta = {}) {
  const TriangularSystem sys(regge_wheeler(s0, p), regge_wheeler(s1, p), delta.to_operator());
  DecouplingSystem ds = decoupling_system(sys);
  const RatFunc r = RatFunc::r();
  const RatFuncMatrix left = RatFuncMatrix::diagonal({r * r, r});
  const RatFuncMatrix right = RatFuncMatrix::diagonal({RatFunc(1), r});
  ds.e = compose(ds.e.left_multiplied(left), DiffOp::multiplication(right));
  ds.rhs = left * ds.rhs;
  return ds;
}

enum class RWPoint { origin, horizon, infinity };

inline std::string to_string(RWPoint pt) {
  switch (pt) {
    case RWPoint::origin: return "0";
    case RWPoint::horizon: return "2M";
    default: return "inf";
  }
}

inline ExpansionPoint expansion_point(RWPoint pt, const RWParams& p) {
  switch (pt) {
    case RWPoint::origin: return ExpansionPoint::finite(0);
    case RWPoint::horizon: return ExpansionPoint::finite(p.horizon());
    default: return ExpansionPoint::infinity();
  }
}

/// Tabulated multipliers at a singular point with the tabulated E_n and det.
/// At 2M the target multiplier is diag(1, (r-2M)/2M); its inverse gives a
/// degenerate second row.
struct RWTable {
  MultiplierPair multipliers;
  Matrix<Poly> E;
  Poly det;
  std::vector<std::int64_t> exponents;
};

inline RWTable rw_multipliers(RWPoint pt, const GaussianRational& s0, const GaussianRational& s1,
                              const RWParams& p) {
  p.validate();
  const Poly n = Poly::x(Var::n);
  auto c = [](const GaussianRational& x) { return Poly(x, Var::n); };
  const GaussianRational M = p.M;
  const GaussianRational w2 = p.omega * p.omega;
  const RatFunc r = RatFunc::r();
  const ExpansionPoint at = expansion_point(pt, p);
  switch (pt) {
    case RWPoint::origin: {
      const GaussianRational k = s1 * s1 - s0 * s0;
      const GaussianRational m2 = GaussianRational(-2) * M;
      Matrix<Poly> E{{(n * n - n.scaled(2) + c(k)).scaled(m2), (n.scaled(GaussianRational(-2) * (GaussianRational(1) - s1 * s1))).scaled(m2)},
                     {n.scaled(2).scaled(m2), (n * n + n.scaled(2) + c(k)).scaled(m2)}};
      Poly det = c(GaussianRational(4) * M * M);
      for (const auto& [a, b] : {std::pair{1, 1}, {1, -1}, {-1, 1}, {-1, -1}})
        det *= n + c(GaussianRational(a) * s0 + GaussianRational(b) * s1);
      const RatFunc rinv = r.inverse();
      return {MultiplierPair(at, RatFuncMatrix::identity(2), RatFuncMatrix::diagonal({rinv, rinv})), E, det,
              integer_roots(det)};
    }
    case RWPoint::horizon: {
      const RatFunc t(Poly::linear(p.horizon()));
      const RatFunc h(p.horizon());
      const Poly n1 = n + c(1);
      Matrix<Poly> E{{n1 * n1, n1.scaled(GaussianRational(-8) * M * M * w2)}, {n1.scaled(2), n1 * n1}};
      const Poly det = n1 * n1 * (n1 * n1 + c(GaussianRational(16) * M * M * w2));
      return {MultiplierPair(at, RatFuncMatrix::diagonal({t / h, t * t / (h * h)}),
                             RatFuncMatrix::diagonal({RatFunc(1), t / h})),
              E, det, integer_roots(det)};
    }
    default: {
      const Poly n1 = n + c(1);
      Matrix<Poly> E{{Poly::zero(Var::n), n1.scaled(GaussianRational(-2) * w2)}, {n.scaled(2), n * n1}};
      const Poly det = (n * n1).scaled(GaussianRational(4) * w2);
      return {MultiplierPair(at, RatFuncMatrix::identity(2), RatFuncMatrix::diagonal({r * r, RatFunc(1)})), E, det,
              integer_roots(det)};
    }
  }
}

/// Ansatz data: delta = f^(m+1) sum_{n=lower}^{upper} d_n r^n, with
/// lower = n_low + m + 1 compensating the r^-(m+1) hidden in f^(m+1).
struct RWBounds {
  Order m_low = Order::plus_infinity();    ///< leading order at 0 of r (Delta0, Delta1)
  Order m_high = Order::minus_infinity();  ///< trailing order at inf of (Delta0 / r^2, Delta1)
  std::int64_t m = -1;                     ///< bound at 2M, at most -1
  std::int64_t n_low = 0;                  ///< min{m_low, -s0-s1}
  std::int64_t n_high = 0;                 ///< max{m_high, 0}
  RatFunc R = 1;                           ///< f^(m+1)
  std::int64_t lower = 0;
  std::int64_t upper = 0;
};

namespace detail {

inline std::int64_t integer_spin(const GaussianRational& s) {
  if (!s.is_integer()) throw PreconditionViolation("spin must be an integer here, got " + s.to_string());
  return s.re().get_num().get_si();
}

inline void check_poles(const RatFunc& x, const RWParams& p) {
  Poly d = x.den();
  for (const auto& root : {GaussianRational(0), p.horizon()})
    while (d.degree() > 0 && d.eval(root).is_zero()) d = d.exact_div(Poly::linear(root));
  if (d.degree() > 0) throw PreconditionViolation("Delta has poles outside r = 0, 2M: " + x.to_string());
}

}  // namespace detail

inline RWBounds rw_bounds(const RWDelta& d, const GaussianRational& s0, const GaussianRational& s1,
                          const RWParams& p) {
  p.validate();
  detail::check_poles(d.Delta0, p);
  detail::check_poles(d.Delta1, p);
  const std::int64_t exp_min = std::min({detail::integer_spin(s0) + detail::integer_spin(s1),
                                         detail::integer_spin(s0) - detail::integer_spin(s1),
                                         -detail::integer_spin(s0) + detail::integer_spin(s1),
                                         -detail::integer_spin(s0) - detail::integer_spin(s1)});
  const RatVec src{d.Delta0, d.Delta1};
  RWBounds b;
  const ExpansionPoint zero = ExpansionPoint::finite(0);
  const ExpansionPoint h = ExpansionPoint::finite(p.horizon());
  b.m_low = vector_leading_order(rw_multipliers(RWPoint::origin, s0, s1, p).multipliers.T_inverse() * src, zero).global;
  b.m_high = vector_trailing_order(rw_multipliers(RWPoint::infinity, s0, s1, p).multipliers.T_inverse() * src).global;
  const Order at_h =
      vector_leading_order(rw_multipliers(RWPoint::horizon, s0, s1, p).multipliers.T_inverse() * src, h).global;
  b.m = std::min<std::int64_t>(-1, at_h.is_finite() ? at_h.value() : -1);
  b.n_low = b.m_low.is_finite() ? std::min(b.m_low.value(), exp_min) : exp_min;
  b.n_high = b.m_high.is_finite() ? std::max<std::int64_t>(b.m_high.value(), 0) : 0;
  b.R = pow(p.f(), b.m + 1);
  b.lower = b.n_low + b.m + 1;
  b.upper = b.n_high;
  return b;
}

/// epsilon = delta1 r d + [2 (r delta1)' - (f1/f) delta1 + delta0].
inline DiffOp rw_epsilon(const RatFunc& delta0, const RatFunc& delta1, const RWParams& p) {
  const RatFunc r = RatFunc::r();
  const RatFunc c0 = RatFunc(2) * (r * delta1).derivative() - p.f1() / p.f() * delta1 + delta0;
  return DiffOp::scalar({c0, delta1 * r});
}

inline DiffOp rw_delta_operator(const RatFunc& delta0, const RatFunc& delta1) {
  return DiffOp::scalar({delta0, delta1 * RatFunc::r()});
}

/// Outcome of the Regge-Wheeler reduction.
struct RWReduction {
  RWBounds bounds;
  SolutionSpace space;
  std::optional<ReductionPair> pair;
  std::vector<ReductionPair> kernel;

  bool exists() const { return pair.has_value(); }
  bool unique() const { return exists() && kernel.empty(); }
};

/// D_s0 o delta - Delta - epsilon o D_s1.
inline DiffOp rw_residual(const GaussianRational& s0, const GaussianRational& s1, const RWParams& p,
                          const RWDelta& d, const ReductionPair& pair) {
  return compose(regge_wheeler(s0, p), pair.delta) - d.to_operator() - compose(pair.epsilon, regge_wheeler(s1, p));
}

inline RWReduction rw_reduce(const RWDelta& d, const GaussianRational& s0, const GaussianRational& s1,
                             const RWParams& p) {
  RWReduction out;
  out.bounds = rw_bounds(d, s0, s1, p);
  const DiffOp e = rw_decoupling_system(s0, s1, p);
  const RatVec rhs{d.Delta0, d.Delta1};
  if (out.bounds.lower > out.bounds.upper) {
    out.space = zero_only_space(e, rhs);
  } else {
    const std::pair<std::int64_t, std::int64_t> range{out.bounds.lower, out.bounds.upper};
    out.space = solve_ansatz(e, rhs, RatFuncMatrix::diagonal({out.bounds.R, out.bounds.R}), {range, range});
  }
  out.space.lower = Order(out.bounds.lower);
  out.space.upper = Order(out.bounds.upper);
  auto to_pair = [&](const RatVec& x, const RWDelta& src) {
    ReductionPair pr{rw_delta_operator(x[0], x[1]), rw_epsilon(x[0], x[1], p)};
    if (!rw_residual(s0, s1, p, src, pr).is_zero()) throw InternalError("Regge-Wheeler pair fails the identity");
    return pr;
  };
  if (out.space.particular) out.pair = to_pair(*out.space.particular, d);
  for (const auto& k : out.space.kernel_basis) out.kernel.push_back(to_pair(k, RWDelta{}));
  return out;
}

struct IdentityCheck {
  bool holds = false;
  DiffOp residual;
};

/// D_s0 o c - f1/r^2 - c o D_s1 with c = 1/(s0^2 - s1^2).
inline IdentityCheck general_identity_check(const GaussianRational& s0, const GaussianRational& s1,
                                            const RWParams& p) {
  const GaussianRational gap = s0 * s0 - s1 * s1;
  if (gap.is_zero()) throw PreconditionViolation("general identity needs s0 != +-s1");
  const DiffOp c = DiffOp::scalar({RatFunc(gap.inverse())});
  const RatFunc r = RatFunc::r();
  const DiffOp residual = compose(regge_wheeler(s0, p), c) - DiffOp::scalar({p.f1() / (r * r)}) -
                          compose(c, regge_wheeler(s1, p));
  return {residual.is_zero(), residual};
}

}  // namespace rode
