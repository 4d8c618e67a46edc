#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rode/diffop.hpp"
#include "rode/error.hpp"
#include "rode/laurent.hpp"
#include "rode/linsolve.hpp"
#include "rode/matrix.hpp"
#include "rode/poly.hpp"
#include "rode/ratfunc.hpp"
#include "rode/roots.hpp"

namespace rode {

namespace detail {

/// True if the denominator of f is a power of the local variable at p.
inline bool has_poles_only_at(const RatFunc& f, const ExpansionPoint& p) {
  const Poly& den = f.den();
  if (den.degree() <= 0) return true;
  if (p.is_infinity()) return den.low_degree() == static_cast<std::size_t>(den.degree());
  const Poly s = den.shifted(p.rho());
  return s.low_degree() == static_cast<std::size_t>(s.degree());
}

inline bool matrix_poles_only_at(const RatFuncMatrix& m, const ExpansionPoint& p) {
  for (const auto& x : m.entries())
    if (!has_poles_only_at(x, p)) return false;
  return true;
}

inline RatFunc local_power(const ExpansionPoint& p, std::int64_t k) { return pow(p.local_variable(), k); }

}  // namespace detail

/// Source (S) and target (T) multipliers at one expansion point.
class MultiplierPair {
 public:
  /// Checks that S, T and their inverses only have poles at the point
  /// (finite points also allow infinity, i.e. polynomial parts).
  MultiplierPair(ExpansionPoint point, RatFuncMatrix S, RatFuncMatrix T)
      : point_(std::move(point)), S_(std::move(S)), T_(std::move(T)) {
    if (!S_.is_square() || !T_.is_square()) throw InvalidMultipliers("multipliers must be square");
    RatFuncMatrix Sinv, Tinv;
    try {
      Sinv = inverse(S_);
      Tinv = inverse(T_);
    } catch (const DivisionByZero&) {
      throw InvalidMultipliers("multiplier at " + point_.to_string() + " is singular");
    }
    for (const auto* m : {&S_, &T_, &Sinv, &Tinv})
      if (!detail::matrix_poles_only_at(*m, point_))
        throw InvalidMultipliers("multiplier at " + point_.to_string() + " has a pole elsewhere: " + m->to_string());
    Sinv_ = std::move(Sinv);
    Tinv_ = std::move(Tinv);
  }

  static MultiplierPair trivial(const ExpansionPoint& p, std::size_t n) {
    return {p, RatFuncMatrix::identity(n), RatFuncMatrix::identity(n)};
  }

  const ExpansionPoint& point() const { return point_; }
  const RatFuncMatrix& S() const { return S_; }
  const RatFuncMatrix& T() const { return T_; }
  const RatFuncMatrix& S_inverse() const { return Sinv_; }
  const RatFuncMatrix& T_inverse() const { return Tinv_; }

 private:
  ExpansionPoint point_;
  RatFuncMatrix S_, T_, Sinv_, Tinv_;
};

using MultiplierMap = std::map<ExpansionPoint, MultiplierPair>;

/// Characteristic matrix E_n at a point, with its determinant and the
/// integer roots of the determinant.
struct CharMatrix {
  ExpansionPoint point = ExpansionPoint::finite(0);
  Matrix<Poly> entries;
  Poly det;
  std::vector<std::int64_t> exponents;

  /// E_n at a concrete integer n.
  Matrix<GaussianRational> at(std::int64_t n) const {
    return entries.map([n](const Poly& p) { return p.eval(GaussianRational(n)); });
  }
};

namespace detail {

/// T^-1 * e[S c t^n] in the falling-factorial basis; throws if some entry
/// violates the multiplier condition.
inline std::vector<RatFuncMatrix> normalized_action(const DiffOp& e, const MultiplierPair& m) {
  if (m.S().rows() != e.cols() || m.T().rows() != e.rows())
    throw DimensionMismatch("multipliers do not fit the operator");
  const PowerAction pa = apply_to_power(e, m.S(), m.point());
  std::vector<RatFuncMatrix> out;
  for (const auto& b : pa.basis) out.push_back(m.T_inverse() * b);
  const bool inf = m.point().is_infinity();
  for (std::size_t j = 0; j < out.size(); ++j)
    for (std::size_t a = 0; a < out[j].rows(); ++a)
      for (std::size_t b = 0; b < out[j].cols(); ++b) {
        const Order v = valuation(out[j](a, b), m.point());
        if (inf ? v > Order(0) : v < Order(0))
          throw InvalidMultipliers("invalid multipliers at " + m.point().to_string() + ": entry (" +
                                   std::to_string(a) + "," + std::to_string(b) + ") of T^-1 e[S t^n] has order " +
                                   v.to_string());
      }
  return out;
}

}  // namespace detail

inline CharMatrix char_matrix(const DiffOp& e, const MultiplierPair& m) {
  const auto basis = detail::normalized_action(e, m);
  CharMatrix out;
  out.point = m.point();
  out.entries = Matrix<Poly>(e.rows(), e.cols());
  for (std::size_t a = 0; a < e.rows(); ++a)
    for (std::size_t b = 0; b < e.cols(); ++b) {
      Poly acc = Poly::zero(Var::n);
      for (std::size_t j = 0; j < basis.size(); ++j) {
        const GaussianRational c = order_zero_coefficient(basis[j](a, b), m.point());
        if (!c.is_zero()) acc += falling_factorial(j).scaled(c);
      }
      out.entries(a, b) = acc;
    }
  out.det = determinant(out.entries);
  if (out.det.is_zero())
    throw InvalidMultipliers("invalid multipliers at " + m.point().to_string() + ": det E_n vanishes identically");
  out.exponents = integer_roots(out.det);
  return out;
}

/// min({n_v} u exponents); +inf when both are empty.
inline Order leading_bound(const CharMatrix& E, const Order& n_v) {
  Order out = n_v;
  for (auto x : E.exponents) out = std::min(out, Order(x));
  return out;
}

/// max({n_v} u exponents); -inf when both are empty.
inline Order trailing_bound(const CharMatrix& E, const Order& n_v) {
  Order out = n_v;
  for (auto x : E.exponents) out = std::max(out, Order(x));
  return out;
}

/// Finite points where a rational solution of e[u] = v may have a pole.
inline std::vector<GaussianRational> pole_candidates(const DiffOp& e, const RatVec& v) {
  const auto [P, tail] = monic_normalize(e);
  if (v.size() != e.rows()) throw DimensionMismatch("pole_candidates: source has the wrong length");
  Poly dens(1);
  auto absorb = [&](const RatFunc& f) {
    if (f.den().degree() > 0) dens = lcm(dens, f.den());
  };
  for (const auto& x : P * v) absorb(x);
  for (const auto& c : tail.coeffs())
    for (const auto& x : c.entries()) absorb(x);
  if (dens.degree() <= 0) return {};
  const RootSplit split = gaussian_rational_roots(dens);
  if (split.unresolved.degree() > 0)
    throw UnsupportedSingularity("singular points outside Q(i): roots of " + split.unresolved.to_string());
  return split.roots;
}

/// Diagonal T matching a given S: each row is scaled by the extreme order
/// of that row of e[S t^n].
inline RatFuncMatrix matching_target(const DiffOp& e, const RatFuncMatrix& S, const ExpansionPoint& p) {
  const PowerAction pa = apply_to_power(e, S, p);
  std::vector<RatFunc> diag;
  for (std::size_t i = 0; i < e.rows(); ++i) {
    Order best = p.is_infinity() ? Order::minus_infinity() : Order::plus_infinity();
    for (const auto& b : pa.basis)
      for (std::size_t j = 0; j < b.cols(); ++j) {
        const Order v = valuation(b(i, j), p);
        best = p.is_infinity() ? std::max(best, v) : std::min(best, v);
      }
    diag.push_back(best.is_finite() ? detail::local_power(p, best.value()) : RatFunc(1));
  }
  return RatFuncMatrix::diagonal(diag);
}

/// Bounded search: S = diag(t^a) with |a_i| <= ord(e) * size, smallest
/// L1 norm first (identity first). Returns nothing if no candidate gives
/// a valid characteristic matrix.
inline std::optional<MultiplierPair> find_multipliers(const DiffOp& e, const ExpansionPoint& p) {
  const std::size_t n = e.cols();
  if (!e.is_square() || e.is_zero()) throw PreconditionViolation("find_multipliers needs a nonzero square operator");
  const std::int64_t w = static_cast<std::int64_t>((e.size() - 1) * n);
  std::vector<std::vector<std::int64_t>> cands{{}};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::vector<std::int64_t>> next;
    for (const auto& c : cands)
      for (std::int64_t a = -w; a <= w; ++a) {
        auto d = c;
        d.push_back(a);
        next.push_back(std::move(d));
      }
    cands = std::move(next);
  }
  auto l1 = [](const std::vector<std::int64_t>& a) {
    std::int64_t s = 0;
    for (auto x : a) s += x < 0 ? -x : x;
    return s;
  };
  std::stable_sort(cands.begin(), cands.end(), [&](const auto& a, const auto& b) { return l1(a) < l1(b); });
  for (const auto& a : cands) {
    std::vector<RatFunc> d;
    for (auto x : a) d.push_back(detail::local_power(p, x));
    const RatFuncMatrix S = RatFuncMatrix::diagonal(d);
    try {
      MultiplierPair m(p, S, matching_target(e, S, p));
      char_matrix(e, m);
      return m;
    } catch (const InvalidMultipliers&) {
    }
  }
  return std::nullopt;
}

/// Result of the local analysis at one point.
struct LocalAnalysis {
  ExpansionPoint point = ExpansionPoint::finite(0);
  std::optional<MultiplierPair> multipliers;
  CharMatrix E;
  Order source_order = Order::plus_infinity();  ///< of T^-1 v
  Order bound = Order::plus_infinity();         ///< bound on S^-1 u
};

namespace detail {

/// With fallback set, supplied multipliers that do not fit e are replaced by
/// a searched pair; this is how multipliers given for e are offered to e o R.
inline MultiplierPair pick_multipliers(const DiffOp& e, const ExpansionPoint& p, const MultiplierMap& given,
                                       bool fallback = false) {
  if (auto it = given.find(p); it != given.end()) {
    try {
      char_matrix(e, it->second);
      return it->second;
    } catch (const InvalidMultipliers&) {
      if (!fallback) throw;
    }
  }
  auto found = find_multipliers(e, p);
  if (!found) throw MissingMultiplier("no multipliers at " + p.to_string() + " and the bounded search found none");
  return *found;
}

inline LocalAnalysis analyze(const DiffOp& e, const RatVec& v, const MultiplierPair& m) {
  LocalAnalysis a;
  a.point = m.point();
  a.multipliers = m;
  a.E = char_matrix(e, m);
  a.source_order = vector_order(m.T_inverse() * v, m.point()).global;
  a.bound = m.point().is_infinity() ? trailing_bound(a.E, a.source_order) : leading_bound(a.E, a.source_order);
  return a;
}

/// Extreme order of the entries of S at p (min at finite points, max at inf).
inline Order extreme_order(const RatFuncMatrix& S, const ExpansionPoint& p) {
  Order out = p.is_infinity() ? Order::minus_infinity() : Order::plus_infinity();
  for (const auto& x : S.entries()) {
    const Order v = valuation(x, p);
    out = p.is_infinity() ? std::max(out, v) : std::min(out, v);
  }
  return out;
}

}  // namespace detail

/// R = prod S_rho (r-rho)^(bound_rho) over the finite pole candidates other
/// than 0, in increasing order of rho. Returns nothing when some bound is
/// +inf, in which case only u = 0 is possible.
inline std::optional<RatFuncMatrix> universal_multiplier(const DiffOp& e, const RatVec& v,
                                                         const MultiplierMap& multipliers,
                                                         std::vector<LocalAnalysis>* analyses = nullptr) {
  RatFuncMatrix R = RatFuncMatrix::identity(e.cols());
  bool bounded = true;
  for (const auto& rho : pole_candidates(e, v)) {
    if (rho.is_zero()) continue;
    const ExpansionPoint p = ExpansionPoint::finite(rho);
    const LocalAnalysis a = detail::analyze(e, v, detail::pick_multipliers(e, p, multipliers));
    if (analyses) analyses->push_back(a);
    if (!a.bound.is_finite()) {
      bounded = false;
      continue;
    }
    R = R * a.multipliers->S().scaled(detail::local_power(p, a.bound.value()));
  }
  if (!bounded) return std::nullopt;
  return R;
}

/// Affine space of rational solutions.
struct SolutionSpace {
  RatFuncMatrix R;
  Order lower = Order::plus_infinity();   ///< lowest power of r in the ansatz
  Order upper = Order::minus_infinity();  ///< highest power of r in the ansatz
  std::optional<RatVec> particular;
  std::vector<RatVec> kernel_basis;
  std::vector<LocalAnalysis> analyses;
  std::size_t equations = 0;
  std::size_t unknowns = 0;
  std::size_t rank = 0;

  bool consistent() const { return particular.has_value(); }
  bool unique() const { return consistent() && kernel_basis.empty(); }
};

namespace detail {

inline bool is_zero_vector(const RatVec& v) {
  return std::all_of(v.begin(), v.end(), [](const RatFunc& f) { return f.is_zero(); });
}

inline void check_residual(const DiffOp& e, const RatVec& u, const RatVec& v, const char* what) {
  const RatVec r = rode::apply(e, u);
  for (std::size_t i = 0; i < r.size(); ++i)
    if (!(r[i] - v[i]).is_zero()) throw InternalError(std::string("nonzero residual for ") + what);
}

}  // namespace detail

/// Solves e[R w] = v for w = sum_{n in [lo_i, hi_i]} c_{i,n} r^n, one range
/// per component, by equating polynomial coefficients after clearing
/// denominators row by row. Returns u = R w. Every reported solution is
/// checked against e[u] = v.
inline SolutionSpace solve_ansatz(const DiffOp& e, const RatVec& v, const RatFuncMatrix& R,
                                  const std::vector<std::pair<std::int64_t, std::int64_t>>& ranges) {
  if (v.size() != e.rows()) throw DimensionMismatch("source has the wrong length");
  if (R.rows() != e.cols() || ranges.size() != R.cols()) throw DimensionMismatch("ansatz does not fit the operator");
  SolutionSpace out;
  out.R = R;
  const DiffOp et = compose(e, DiffOp::multiplication(R));

  struct Unknown {
    std::size_t component;
    std::int64_t power;
  };
  std::vector<Unknown> unknowns;
  for (std::size_t i = 0; i < ranges.size(); ++i)
    for (std::int64_t n = ranges[i].first; n <= ranges[i].second; ++n) unknowns.push_back({i, n});
  out.unknowns = unknowns.size();

  std::vector<RatVec> images;
  for (const auto& u : unknowns) {
    RatVec w(R.cols());
    w[u.component] = pow(RatFunc::r(), u.power);
    images.push_back(rode::apply(et, w));
  }

  std::vector<std::vector<GaussianRational>> rows;
  GaussVec rhs;
  for (std::size_t i = 0; i < e.rows(); ++i) {
    Poly L = v[i].den();
    for (const auto& img : images) L = lcm(L, img[i].den());
    auto cleared = [&](const RatFunc& f) { return f.num() * L.exact_div(f.den()); };
    std::vector<Poly> cols;
    std::size_t deg = 0;
    for (const auto& img : images) {
      cols.push_back(cleared(img[i]));
      deg = std::max<std::size_t>(deg, std::max(cols.back().degree(), 0));
    }
    const Poly b = cleared(v[i]);
    deg = std::max<std::size_t>(deg, std::max(b.degree(), 0));
    for (std::size_t k = 0; k <= deg; ++k) {
      std::vector<GaussianRational> row;
      bool nonzero = !b.coeff(k).is_zero();
      for (const auto& c : cols) {
        row.push_back(c.coeff(k));
        nonzero = nonzero || !row.back().is_zero();
      }
      if (!nonzero) continue;
      rows.push_back(std::move(row));
      rhs.push_back(b.coeff(k));
    }
  }
  out.equations = rows.size();
  Matrix<GaussianRational> A(rows.size(), unknowns.size());
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t b = 0; b < unknowns.size(); ++b) A(a, b) = rows[a][b];
  const AffineSolutionSet sol = linsolve_exact(A, rhs);
  out.rank = sol.rank;

  auto assemble = [&](const GaussVec& c) {
    RatVec w(R.cols());
    for (std::size_t k = 0; k < unknowns.size(); ++k)
      if (!c[k].is_zero()) w[unknowns[k].component] += RatFunc(c[k]) * pow(RatFunc::r(), unknowns[k].power);
    return R * w;
  };
  if (sol.particular) {
    out.particular = assemble(*sol.particular);
    detail::check_residual(e, *out.particular, v, "the particular solution");
  }
  const RatVec zero(e.rows());
  for (const auto& k : sol.kernel_basis) {
    out.kernel_basis.push_back(assemble(k));
    detail::check_residual(e, out.kernel_basis.back(), zero, "a kernel vector");
  }
  return out;
}

/// Space consisting of u = 0 only, consistent iff v = 0.
inline SolutionSpace zero_only_space(const DiffOp& e, const RatVec& v) {
  SolutionSpace out;
  out.R = RatFuncMatrix::identity(e.cols());
  if (detail::is_zero_vector(v)) out.particular = RatVec(e.cols());
  return out;
}

/// All rational solutions of e[u] = v. Multipliers missing from the map
/// are searched for; supplied ones at 0 and inf are used for e o R when
/// they validate there.
inline SolutionSpace solve_rational(const DiffOp& e, const RatVec& v, const MultiplierMap& multipliers = {}) {
  if (!e.is_square()) throw DimensionMismatch("solve_rational needs a square operator");
  if (v.size() != e.rows()) throw DimensionMismatch("source has the wrong length");
  std::vector<LocalAnalysis> analyses;
  const auto R = universal_multiplier(e, v, multipliers, &analyses);
  if (!R) {
    SolutionSpace out = zero_only_space(e, v);
    out.analyses = std::move(analyses);
    return out;
  }
  const DiffOp et = compose(e, DiffOp::multiplication(*R));
  const ExpansionPoint zero = ExpansionPoint::finite(0);
  const ExpansionPoint inf = ExpansionPoint::infinity();
  const LocalAnalysis at0 = detail::analyze(et, v, detail::pick_multipliers(et, zero, multipliers, true));
  const LocalAnalysis atinf = detail::analyze(et, v, detail::pick_multipliers(et, inf, multipliers, true));
  analyses.push_back(at0);
  analyses.push_back(atinf);

  SolutionSpace out;
  if (!at0.bound.is_finite() || !atinf.bound.is_finite()) {
    out = zero_only_space(e, v);
  } else {
    const Order lo = at0.bound + detail::extreme_order(at0.multipliers->S(), zero);
    const Order hi = atinf.bound + detail::extreme_order(atinf.multipliers->S(), inf);
    if (lo > hi) {
      out = zero_only_space(e, v);
    } else {
      std::vector<std::pair<std::int64_t, std::int64_t>> ranges(e.cols(), {lo.value(), hi.value()});
      out = solve_ansatz(e, v, *R, ranges);
    }
    out.lower = lo;
    out.upper = hi;
  }
  out.R = *R;
  out.analyses = std::move(analyses);
  return out;
}

}  // namespace rode
