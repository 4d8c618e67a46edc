#include <catch_amalgamated.hpp>

#include "support.hpp"

using namespace rode;
using rt::q;

namespace {
const ExpansionPoint zero = ExpansionPoint::finite(0);
const ExpansionPoint two = ExpansionPoint::finite(2);
const ExpansionPoint inf = ExpansionPoint::infinity();
const RWParams unit{};
}  // namespace

TEST_CASE("order sentinels") {
  CHECK(Order(3) + Order::plus_infinity() == Order::plus_infinity());
  CHECK(Order::minus_infinity() < Order(-100));
  CHECK(Order(100) < Order::plus_infinity());
  CHECK(std::min(Order(2), Order(-1)) == Order(-1));
}

TEST_CASE("valuation") {
  CHECK(valuation(unit.f1(), zero) == Order(-1));
  CHECK(valuation(RatFunc(), zero) == Order::plus_infinity());
  CHECK(valuation(unit.f(), two) == Order(1));
  CHECK(valuation(unit.f(), inf) == Order(0));
  CHECK(valuation(rt::rf("r^3/(r-1)"), inf) == Order(2));
  CHECK(valuation(rt::rf("r^3/(r-1)"), ExpansionPoint::finite(1)) == Order(-1));
}

TEST_CASE("expand") {
  SECTION("geometric series at 0") {
    const auto e = expand(rt::rf("1/(1-r)"), zero, 3);
    CHECK(e.valuation == Order(0));
    CHECK(e.coeffs == std::vector<GaussianRational>{q(1), q(1), q(1)});
  }
  SECTION("1/f at infinity") {
    const auto e = expand(unit.f().inverse(), inf, 3);
    CHECK(e.valuation == Order(0));
    CHECK(e.coeffs == std::vector<GaussianRational>{q(1), q(2), q(4)});
    CHECK(e.coeff_of(-2) == q(4));
  }
  SECTION("f at the horizon") {
    const auto e = expand(unit.f(), two, 2);
    CHECK(e.valuation == Order(1));
    CHECK(e.coeffs == std::vector<GaussianRational>{q(1, 2), q(-1, 4)});
  }
  SECTION("zero") {
    const auto e = expand(RatFunc(), zero, 3);
    CHECK(e.valuation == Order::plus_infinity());
    CHECK(e.coeff_of(0).is_zero());
  }
}

TEST_CASE("order-zero coefficient") {
  CHECK(order_zero_coefficient(rt::rf("(r+3)/(r-1)"), zero) == q(-3));
  CHECK(order_zero_coefficient(rt::rf("(2*r+3)/(r-1)"), inf) == q(2));
  CHECK(order_zero_coefficient(rt::rf("r"), zero).is_zero());
  CHECK_THROWS_AS(order_zero_coefficient(rt::rf("1/r"), zero), PreconditionViolation);
}

TEST_CASE("vector leading and trailing data") {
  SECTION("Example 1 source at 0") {
    const auto o = vector_leading_order({unit.f1(), RatFunc()}, zero);
    CHECK(o.orders == std::vector<Order>{Order(-1), Order::plus_infinity()});
    CHECK(o.global == Order(-1));
    CHECK(o.coeff == std::vector<GaussianRational>{q(2), q(0)});
  }
  SECTION("zero vector") {
    const auto o = vector_leading_order({RatFunc(), RatFunc()}, zero);
    CHECK(o.global == Order::plus_infinity());
    CHECK(o.coeff == std::vector<GaussianRational>{q(0), q(0)});
  }
  SECTION("trailing at infinity") {
    const auto o = vector_trailing_order({rt::rf("r^2"), rt::rf("r")});
    CHECK(o.orders == std::vector<Order>{Order(2), Order(1)});
    CHECK(o.global == Order(2));
    CHECK(o.coeff == std::vector<GaussianRational>{q(1), q(0)});
  }
  CHECK_THROWS_AS(vector_leading_order({RatFunc(1)}, inf), PreconditionViolation);
}

TEST_CASE("valuation is additive", "[property]") {
  rt::Random rnd(11);
  const std::vector<GaussianRational> poles{q(0), q(1), q(-2)};
  for (int trial = 0; trial < 60; ++trial) {
    const RatFunc f = rnd.ratfunc(poles, 3);
    const RatFunc g = rnd.ratfunc(poles, 3);
    for (const auto& p : {zero, ExpansionPoint::finite(1), ExpansionPoint::finite(-2), ExpansionPoint::finite(5), inf}) {
      const Order vf = valuation(f, p);
      const Order vg = valuation(g, p);
      const Order vfg = valuation(f * g, p);
      // The zero function sits at +inf at finite points and -inf at infinity.
      const Order zero_order = p.is_infinity() ? Order::minus_infinity() : Order::plus_infinity();
      if (vf.is_finite() && vg.is_finite())
        CHECK(vfg == vf + vg);
      else
        CHECK(vfg == zero_order);
    }
  }
}

TEST_CASE("expansion prefix matches the function", "[property]") {
  rt::Random rnd(12);
  const std::vector<GaussianRational> poles{q(0), q(1)};
  constexpr std::size_t terms = 4;
  for (int trial = 0; trial < 40; ++trial) {
    const RatFunc f = rnd.ratfunc(poles, 3);
    for (const auto& p : {zero, ExpansionPoint::finite(1), ExpansionPoint::finite(3)}) {
      const auto e = expand(f, p, terms);
      CHECK((valuation(f, p) == Order::plus_infinity()) == f.is_zero());
      if (f.is_zero()) continue;
      RatFunc prefix;
      const RatFunc t = p.local_variable();
      for (std::size_t k = 0; k < terms; ++k)
        prefix += RatFunc(e.coeffs[k]) * pow(t, e.valuation.value() + static_cast<long>(k));
      CHECK(valuation(f - prefix, p) >= e.valuation + Order(static_cast<std::int64_t>(terms)));
      CHECK_FALSE(e.coeffs.front().is_zero());
    }
  }
}
