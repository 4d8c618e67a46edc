#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "rode/diffop.hpp"
#include "rode/error.hpp"
#include "rode/ratsolve.hpp"

namespace rode {

/// Block upper triangular system [[e0, Delta], [0, e1]].
struct TriangularSystem {
  DiffOp e0;
  DiffOp e1;
  DiffOp Delta;

  TriangularSystem(DiffOp e0_, DiffOp e1_, DiffOp delta_)
      : e0(std::move(e0_)), e1(std::move(e1_)), Delta(std::move(delta_)) {
    if (!e0.is_square() || !e1.is_square()) throw DimensionMismatch("diagonal blocks must be square");
    if (Delta.rows() != e0.rows() || Delta.cols() != e1.cols())
      throw DimensionMismatch("off-diagonal block does not fit the diagonal blocks");
    monic_normalize(e0);
    monic_normalize(e1);
  }

  std::size_t p0() const { return e0.size() - 1; }
  std::size_t p1() const { return e1.size() - 1; }
};

/// (delta, epsilon) with e0 o delta = Delta + epsilon o e1.
struct ReductionPair {
  DiffOp delta;
  DiffOp epsilon;
};

/// e0 o delta - Delta - epsilon o e1.
inline DiffOp offdiag_residual(const TriangularSystem& sys, const ReductionPair& pair) {
  return compose(sys.e0, pair.delta) - sys.Delta - compose(pair.epsilon, sys.e1);
}

inline bool satisfies_offdiag(const TriangularSystem& sys, const ReductionPair& pair) {
  return offdiag_residual(sys, pair).is_zero();
}

/// (delta + alpha o e1, epsilon + e0 o alpha).
inline ReductionPair gauge_shift(const ReductionPair& pair, const DiffOp& alpha, const TriangularSystem& sys) {
  return {pair.delta + compose(alpha, sys.e1), pair.epsilon + compose(sys.e0, alpha)};
}

/// Replaces delta by its remainder modulo e1 and adjusts epsilon.
inline ReductionPair reduce_delta_order(const TriangularSystem& sys, const DiffOp& delta, const DiffOp& epsilon) {
  if (!satisfies_offdiag(sys, {delta, epsilon}))
    throw PreconditionViolation("reduce_delta_order: the pair does not satisfy e0 o delta = Delta + epsilon o e1");
  if (sys.Delta.size() > sys.p0() + sys.p1())
    throw PreconditionViolation("reduce_delta_order: ord(Delta) must be below ord(e0) + ord(e1)");
  const Division div = right_divide(delta, sys.e1);
  return {div.remainder, epsilon - compose(sys.e0, div.quotient)};
}

/// Either the unique epsilon, or the nonzero remainder that rules it out.
struct EpsilonReconstruction {
  std::optional<DiffOp> epsilon;
  DiffOp remainder;
};

inline EpsilonReconstruction reconstruct_epsilon(const TriangularSystem& sys, const DiffOp& delta) {
  if (delta.rows() != sys.e0.cols() || delta.cols() != sys.e1.rows())
    throw DimensionMismatch("reconstruct_epsilon: delta has the wrong shape");
  if (delta.size() > sys.p1()) throw PreconditionViolation("reconstruct_epsilon: ord(delta) must be below ord(e1)");
  const Division div = right_divide(compose(sys.e0, delta) - sys.Delta, sys.e1);
  EpsilonReconstruction out;
  out.remainder = div.remainder;
  if (div.remainder.is_zero()) out.epsilon = div.quotient;
  return out;
}

/// Linear ODE system e[x] = rhs for the stacked entries of delta_0 .. delta_{p1-1}.
/// Index of unknown (k, u, v) is (k * rows + u) * cols + v, where delta_k is
/// rows x cols; equations are indexed the same way by derivative order t.
struct DecouplingSystem {
  DiffOp e;
  RatVec rhs;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t p1 = 0;

  /// delta = sum_k delta_k d^k from a solution vector.
  DiffOp delta_from(const RatVec& x) const {
    std::vector<RatFuncMatrix> c;
    for (std::size_t k = 0; k < p1; ++k) {
      RatFuncMatrix m(rows, cols);
      for (std::size_t u = 0; u < rows; ++u)
        for (std::size_t v = 0; v < cols; ++v) m(u, v) = x[(k * rows + u) * cols + v];
      c.push_back(std::move(m));
    }
    return DiffOp(rows, cols, std::move(c));
  }
};

namespace detail {

/// Remainders rho_m of d^m modulo e1 for m = 0 .. count-1.
inline std::vector<DiffOp> derivative_remainders(const DiffOp& e1, std::size_t count) {
  std::vector<DiffOp> out;
  const std::size_t b = e1.rows();
  for (std::size_t m = 0; m < count; ++m) out.push_back(right_divide(DiffOp::derivative(b, m), e1).remainder);
  return out;
}

}  // namespace detail

/// The remainder of e0 o delta - Delta modulo e1 vanishes iff e[x] = rhs.
/// Left multiplication by functions commutes with taking remainders, so
/// e0 o delta = sum_{i,k,s} C(i,s) C_i delta_k^(s) d^(i-s+k) reduces via
/// the remainders of plain powers of d.
inline DecouplingSystem decoupling_system(const TriangularSystem& sys) {
  const std::size_t p0 = sys.p0();
  const std::size_t p1 = sys.p1();
  if (p1 == 0) throw PreconditionViolation("decoupling_system: e1 must have positive order");
  if (sys.Delta.size() > p0 + p1) throw PreconditionViolation("decoupling_system: ord(Delta) must be below p0 + p1");
  const std::size_t a = sys.e0.rows();
  const std::size_t b = sys.e1.rows();
  const std::size_t N = p1 * a * b;
  const auto rho = detail::derivative_remainders(sys.e1, p0 + p1);
  auto idx = [&](std::size_t k, std::size_t u, std::size_t v) { return (k * a + u) * b + v; };

  std::vector<RatFuncMatrix> coeffs(p0 + 1, RatFuncMatrix(N, N));
  for (std::size_t s = 0; s <= p0; ++s)
    for (std::size_t i = 0; i + s <= p0; ++i) {
      const RatFuncMatrix C = sys.e0.coeff(i + s);
      if (C.is_zero()) continue;
      const RatFunc binom(detail::binomial(i + s, i));
      for (std::size_t k = 0; k < p1; ++k) {
        const DiffOp& r = rho[i + k];
        for (std::size_t t = 0; t < p1; ++t) {
          const RatFuncMatrix R = r.coeff(t);
          if (R.is_zero()) continue;
          for (std::size_t x = 0; x < a; ++x)
            for (std::size_t u = 0; u < a; ++u) {
              if (C(x, u).is_zero()) continue;
              const RatFunc cu = binom * C(x, u);
              for (std::size_t v = 0; v < b; ++v)
                for (std::size_t y = 0; y < b; ++y)
                  if (!R(v, y).is_zero()) coeffs[s](idx(t, x, y), idx(k, u, v)) += cu * R(v, y);
            }
        }
      }
    }

  DecouplingSystem out;
  out.e = DiffOp(N, N, std::move(coeffs));
  out.rows = a;
  out.cols = b;
  out.p1 = p1;
  out.rhs = RatVec(N);
  const DiffOp rem = right_divide(sys.Delta, sys.e1).remainder;
  for (std::size_t t = 0; t < p1; ++t) {
    const RatFuncMatrix R = rem.coeff(t);
    for (std::size_t x = 0; x < a; ++x)
      for (std::size_t y = 0; y < b; ++y) out.rhs[idx(t, x, y)] = R(x, y);
  }
  return out;
}

/// Verdict of the reduction problem.
struct ReductionResult {
  std::optional<ReductionPair> pair;
  bool unique = false;
  /// Homogeneous pairs (Delta = 0) spanning the freedom left in delta.
  std::vector<ReductionPair> kernel;
  SolutionSpace space;
  /// On nonexistence: remainder of Delta modulo e1 (the obstruction for delta = 0).
  DiffOp certificate;

  bool exists() const { return pair.has_value(); }
};

namespace detail {

inline ReductionPair pair_from_solution(const TriangularSystem& sys, const DecouplingSystem& ds, const RatVec& x) {
  const DiffOp delta = ds.delta_from(x);
  const EpsilonReconstruction eps = reconstruct_epsilon(sys, delta);
  if (!eps.epsilon) throw InternalError("decoupling solution leaves a nonzero remainder");
  ReductionPair p{delta, *eps.epsilon};
  if (!satisfies_offdiag(sys, p)) throw InternalError("reduction pair fails the operator identity");
  return p;
}

}  // namespace detail

/// Decides whether the system can be brought to block diagonal form.
inline ReductionResult decide_reduction(const TriangularSystem& sys, const MultiplierMap& multipliers = {}) {
  const DecouplingSystem ds = decoupling_system(sys);
  ReductionResult out;
  out.space = solve_rational(ds.e, ds.rhs, multipliers);
  if (!out.space.consistent()) {
    out.certificate = right_divide(sys.Delta, sys.e1).remainder;
    return out;
  }
  out.pair = detail::pair_from_solution(sys, ds, *out.space.particular);
  const TriangularSystem homogeneous(sys.e0, sys.e1, DiffOp(sys.Delta.rows(), sys.Delta.cols()));
  for (const auto& k : out.space.kernel_basis) out.kernel.push_back(detail::pair_from_solution(homogeneous, ds, k));
  out.unique = out.kernel.empty();
  return out;
}

/// 2x2 block operator [[a, b], [c, d]].
inline DiffOp block(const DiffOp& a, const DiffOp& b, const DiffOp& c, const DiffOp& d) {
  if (a.rows() != b.rows() || c.rows() != d.rows() || a.cols() != c.cols() || b.cols() != d.cols())
    throw DimensionMismatch("block operator pieces do not fit");
  const std::size_t rows = a.rows() + c.rows();
  const std::size_t cols = a.cols() + b.cols();
  const std::size_t n = std::max({a.size(), b.size(), c.size(), d.size()});
  std::vector<RatFuncMatrix> coeffs(n, RatFuncMatrix(rows, cols));
  auto place = [&](const DiffOp& op, std::size_t r0, std::size_t c0) {
    for (std::size_t k = 0; k < op.size(); ++k)
      for (std::size_t i = 0; i < op.rows(); ++i)
        for (std::size_t j = 0; j < op.cols(); ++j) coeffs[k](r0 + i, c0 + j) = op.coeffs()[k](i, j);
  };
  place(a, 0, 0);
  place(b, 0, a.cols());
  place(c, a.rows(), 0);
  place(d, a.rows(), a.cols());
  return DiffOp(rows, cols, std::move(coeffs));
}

/// Arrows between the triangular system and its diagonal form:
/// diagonal o forward = source_transform o triangular, and
/// triangular o backward = source_inverse o diagonal.
struct EquivalenceWitness {
  DiffOp triangular;
  DiffOp diagonal;
  DiffOp forward;
  DiffOp backward;
  DiffOp source_transform;
  DiffOp source_inverse;

  bool check() const {
    const std::size_t n = triangular.rows();
    const DiffOp id = DiffOp::identity(n);
    return compose(diagonal, forward) == compose(source_transform, triangular) &&
           compose(triangular, backward) == compose(source_inverse, diagonal) &&
           compose(forward, backward) == id && compose(backward, forward) == id &&
           compose(source_transform, source_inverse) == id && compose(source_inverse, source_transform) == id;
  }
};

inline EquivalenceWitness equivalence_witness(const TriangularSystem& sys, const ReductionPair& pair) {
  const std::size_t a = sys.e0.rows();
  const std::size_t b = sys.e1.rows();
  const DiffOp ia = DiffOp::identity(a);
  const DiffOp ib = DiffOp::identity(b);
  const DiffOp zero_ba(b, a);
  const DiffOp zero_ab(a, b);
  return {block(sys.e0, sys.Delta, zero_ba, sys.e1), block(sys.e0, zero_ab, zero_ba, sys.e1),
          block(ia, pair.delta, zero_ba, ib),       block(ia, -pair.delta, zero_ba, ib),
          block(ia, pair.epsilon, zero_ba, ib),     block(ia, -pair.epsilon, zero_ba, ib)};
}

}  // namespace rode
