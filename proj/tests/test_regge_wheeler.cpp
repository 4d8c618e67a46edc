#include <catch_amalgamated.hpp>

#include "support.hpp"

using namespace rode;
using rt::q;

namespace {

const Poly n = Poly::x(Var::n);
Poly nc(const GaussianRational& c) { return Poly(c, Var::n); }

RWDelta scalar_delta(const std::string& id, const std::string& dr, const RWParams& p) {
  const auto sym = rw_symbols(p);
  return RWDelta::from_operator(DiffOp::scalar({rt::rf(id, sym), rt::rf(dr, sym)}));
}

}  // namespace

TEST_CASE("Regge-Wheeler operator") {
  const RWParams p;
  const auto sym = rw_symbols(p);
  const DiffOp D1 = regge_wheeler(1, p);
  CHECK(D1.coeff(2)(0, 0) == p.f());
  CHECK(D1.coeff(1)(0, 0) == p.f().derivative());
  CHECK(D1.coeff(0)(0, 0) == rt::rf("-B/r^2 + omega^2/f", sym));
  const DiffOp gap = regge_wheeler(0, p) - D1;
  CHECK(gap == DiffOp::scalar({rt::rf("-f1/r^2", sym)}));
  CHECK_THROWS_AS(regge_wheeler(0, RWParams{1, 0, 2, 1}), PreconditionViolation);
  CHECK_THROWS_AS(regge_wheeler(0, RWParams{0, 1, 2, 1}), PreconditionViolation);
}

TEST_CASE("Delta encoding") {
  const RWParams p;
  const RWDelta d = scalar_delta("f1/r^2", "0", p);
  CHECK(d.Delta0 == p.f1());
  CHECK(d.Delta1.is_zero());
  CHECK(d.to_operator() == DiffOp::scalar({p.f1() / rt::rf("r^2")}));
  const RWDelta e = scalar_delta("1/r", "r^3", p);
  CHECK(RWDelta::from_operator(e.to_operator()).Delta1 == e.Delta1);
  CHECK_THROWS_AS(RWDelta::from_operator(DiffOp::derivative(1, 2)), PreconditionViolation);
}

TEST_CASE("decoupling system entries") {
  const RWParams p;
  const DiffOp e = rw_decoupling_system(0, 1, p);
  CHECK(e.coeff(1)(1, 0) == RatFunc(2) * p.f() * RatFunc::r());
  CHECK(e.coeff(0)(1, 0).is_zero());
  CHECK(e.coeff(2) == RatFuncMatrix::diagonal({p.f() * rt::rf("r^2"), p.f() * rt::rf("r^2")}));
}

TEST_CASE("decoupling system matches the generic construction") {
  for (const RWParams& p : {RWParams{}, RWParams{q(1, 2), q(3, 2), 3, 1}, RWParams{q(2), rt::qi(1, 1, 1, 2), 1, 1}})
    for (std::int64_t s0 = 0; s0 <= 3; ++s0)
      for (std::int64_t s1 = 0; s1 <= 3; ++s1) {
        const RWDelta delta = scalar_delta("f1/r^2 + r", "1/r", p);
        const DecouplingSystem g = rw_generic_decoupling(s0, s1, p, delta);
        CHECK(g.e == rw_decoupling_system(s0, s1, p));
        CHECK(g.rhs == RatVec{delta.Delta0, delta.Delta1});
      }
}

TEST_CASE("characteristic tables") {
  const RWParams p;
  const GaussianRational w2 = p.omega * p.omega;
  for (std::int64_t s0 = 0; s0 <= 3; ++s0)
    for (std::int64_t s1 = 0; s1 <= 3; ++s1) {
      const DiffOp e = rw_decoupling_system(s0, s1, p);
      for (RWPoint pt : {RWPoint::origin, RWPoint::horizon, RWPoint::infinity}) {
        const RWTable t = rw_multipliers(pt, s0, s1, p);
        const CharMatrix E = char_matrix(e, t.multipliers);
        CHECK(E.entries == t.E);
        CHECK(E.det == t.det);
        CHECK(E.exponents == t.exponents);
      }
      std::vector<std::int64_t> expected{s0 + s1, s0 - s1, -s0 + s1, -s0 - s1};
      std::sort(expected.begin(), expected.end());
      expected.erase(std::unique(expected.begin(), expected.end()), expected.end());
      CHECK(rw_multipliers(RWPoint::origin, s0, s1, p).exponents == expected);
      CHECK(rw_multipliers(RWPoint::horizon, s0, s1, p).exponents == std::vector<std::int64_t>{-1});
      const RWTable inf = rw_multipliers(RWPoint::infinity, s0, s1, p);
      CHECK(inf.exponents == std::vector<std::int64_t>{-1, 0});
      CHECK(inf.det == nc(4 * w2) * n * (n + nc(1)));
    }
  const RWTable h = rw_multipliers(RWPoint::horizon, 1, 2, p);
  CHECK(h.det == (n + nc(1)) * (n + nc(1)) * ((n + nc(1)) * (n + nc(1)) + nc(16 * p.M * p.M * w2)));
}

TEST_CASE("bounds") {
  const RWParams p;
  SECTION("Example 1") {
    const RWBounds b = rw_bounds(scalar_delta("f1/r^2", "0", p), 0, 1, p);
    CHECK(b.n_low == -1);
    CHECK(b.n_high == 0);
    CHECK(b.R == RatFunc(1));
  }
  SECTION("Example 4") {
    const auto sym = rw_symbols(p);
    const RWDelta d = RWDelta::from_operator(DiffOp::scalar(
        {rt::rf("24*i*f1*r^2*omega^3 - 2*i*(A + 2*(B-3) + (A-B)*(1+2*B) + 2*(A+6*B)*f - 9*(A/B)*f^2 - 12*f^3)*omega + "
                "i*f1*B*(A*(B - 7*f) + 12*f*(1 - (2+B)*f + f^2))/(r^2*omega)",
                sym),
         rt::rf("-4*i*f*(6*f*f1 + 6*B*f1 + A)*r*omega + f1*f*B*(-4*f1^2 + 8*f*f1 - 4*B + 16*f*B + A)/(i*r*omega)",
                sym)}));
    const RWBounds b = rw_bounds(d, 0, 2, p);
    CHECK(b.n_low == -3);
    CHECK(b.n_high == 2);
  }
  SECTION("homogeneous") {
    const RWBounds b = rw_bounds(RWDelta{}, 1, 2, p);
    CHECK(b.n_low == -3);
    CHECK(b.n_high == 0);
  }
  SECTION("poles away from 0 and 2M are rejected") {
    CHECK_THROWS_AS(rw_bounds(scalar_delta("1/(r-1)", "0", p), 0, 1, p), PreconditionViolation);
  }
}

TEST_CASE("rw_reduce") {
  const RWParams p;
  SECTION("Example 1") {
    const RWReduction r = rw_reduce(scalar_delta("f1/r^2", "0", p), 0, 1, p);
    REQUIRE(r.unique());
    CHECK(r.pair->delta == DiffOp::scalar({RatFunc(-1)}));
    CHECK(r.pair->epsilon == DiffOp::scalar({RatFunc(-1)}));
  }
  SECTION("Example 2") { CHECK_FALSE(rw_reduce(scalar_delta("f1/r^2", "0", p), 0, 0, p).exists()); }
  SECTION("Example 3") { CHECK_FALSE(rw_reduce(scalar_delta("-f1/r^2*(B + f1/2)", "0", p), 0, 0, p).exists()); }
  SECTION("epsilon follows the parametrization") {
    const RWDelta d = scalar_delta("f1/r^2", "0", p);
    const RWReduction r = rw_reduce(d, 0, 1, p);
    const RatVec& x = *r.space.particular;
    CHECK(r.pair->epsilon == rw_epsilon(x[0], x[1], p));
    CHECK(rw_residual(0, 1, p, d, *r.pair).is_zero());
  }
  SECTION("constructed source with a pole at the horizon") {
    const RatFunc d0 = rt::rf("1/(r-2) + r");
    const RatFunc d1 = rt::rf("1/r");
    const DiffOp Delta = compose(regge_wheeler(1, p), rw_delta_operator(d0, d1)) -
                         compose(rw_epsilon(d0, d1, p), regge_wheeler(2, p));
    const RWDelta d = RWDelta::from_operator(Delta);
    const RWReduction r = rw_reduce(d, 1, 2, p);
    REQUIRE(r.exists());
    const RatVec& x = *r.space.particular;
    std::vector<RatVec> kernel;
    for (const auto& k : r.space.kernel_basis) kernel.push_back(k);
    CHECK(rt::in_affine_span({d0, d1}, x, kernel));
  }
}

TEST_CASE("nonexistence survives a widened ansatz", "[property]") {
  const RWParams p;
  for (const char* src : {"f1/r^2", "-f1/r^2*(B + f1/2)"}) {
    const RWDelta d = scalar_delta(src, "0", p);
    REQUIRE_FALSE(rw_reduce(d, 0, 0, p).exists());
    CHECK_FALSE(rt::rw_oracle(d, 0, 0, p).consistent);
  }
  const RWDelta ex1 = scalar_delta("f1/r^2", "0", p);
  std::vector<RatFunc> basis;
  const rt::OracleResult o = rt::rw_oracle(ex1, 0, 1, p, &basis);
  REQUIRE(o.consistent);
  CHECK(o.kernel_dimension() == 0);
  CHECK(rt::assemble(o.particular, basis, 2) == RatVec{RatFunc(-1), RatFunc()});
}

TEST_CASE("general identity") {
  const RWParams p;
  for (auto [s0, s1] : {std::pair{q(0), q(1)}, std::pair{q(0), q(2)}, std::pair{q(1), q(2)}, std::pair{q(2), q(3)},
                        std::pair{q(1, 2), q(3, 2)}})
    CHECK(general_identity_check(s0, s1, p).holds);
  CHECK_THROWS_AS(general_identity_check(1, 1, p), PreconditionViolation);
  CHECK_THROWS_AS(general_identity_check(1, -1, p), PreconditionViolation);
}
