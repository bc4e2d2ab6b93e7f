#include <doctest.h>

#include "freefield/errors.hpp"
#include "freefield/eucl.hpp"
#include "freefield/fqctx.hpp"
#include "freefield/fqpoly.hpp"
#include "oracles.hpp"

using namespace freefield;
using eucl::RingElem;

TEST_CASE("integer mobius, totient and divisors match a naive sieve") {
  for (long n = 1; n <= 200; ++n) {
    RingElem e = RingElem::integer(n);
    CHECK(eucl::mobius(e) == oracle::mobius_int(n));
    CHECK(eucl::euler_phi(e) == oracle::phi_int(n));
    CHECK(eucl::squarefree_count(e) == oracle::squarefree_divisor_count_int(n));
    auto divs = eucl::divisors(e);
    auto expect = oracle::divisors_int(n);
    REQUIRE(divs.size() == expect.size());
    for (size_t i = 0; i < divs.size(); ++i)
      CHECK(divs[i].int_value() == expect[i]);
  }
}

TEST_CASE("integers normalize to nonnegative associates") {
  CHECK(RingElem::integer(-6).int_value() == 6);
  CHECK(RingElem::integer(0).is_zero());
  CHECK(RingElem::integer(1).is_one());
  CHECK(RingElem::integer(-1).is_one());
}

TEST_CASE("polynomials normalize to monic associates") {
  auto F3 = FqCtx::prime(3);
  RingElem e = RingElem::poly(fq_from_coeffs(F3, {2, 2}));  // 2x + 2
  CHECK(e.poly_value().coeffs == std::vector<uint64_t>{1, 1});
  CHECK(e.str() == "x+1");
  CHECK(e.quotient_size() == 3);
}

TEST_CASE("gcd, lcm, divisibility and valuation on both rings") {
  auto I = [](long v) { return RingElem::integer(v); };
  CHECK(eucl::gcd_n(I(12), I(8)) == I(4));
  CHECK(eucl::lcm(I(4), I(6)) == I(12));
  CHECK(eucl::divides(I(3), I(12)));
  CHECK(!eucl::divides(I(5), I(12)));
  CHECK(eucl::reduce_by(I(8), I(2)) == I(4));
  CHECK(eucl::reduce_by(I(12), I(2)) == I(6));
  CHECK(eucl::valuation(I(2), I(24)) == 3);
  CHECK(eucl::div_exact(I(24), I(6)) == I(4));
  CHECK_THROWS(eucl::div_exact(I(24), I(5)));

  auto F2 = FqCtx::prime(2);
  auto P = [&](std::vector<uint64_t> c) {
    return RingElem::poly(fq_from_coeffs(F2, c));
  };
  RingElem x3p1 = P({1, 0, 0, 1});  // (x+1)(x^2+x+1)
  CHECK(eucl::gcd_n(x3p1, P({1, 1})) == P({1, 1}));
  CHECK(eucl::divides(P({1, 1, 1}), x3p1));
  CHECK(eucl::valuation(P({1, 1}), P({1, 0, 1})) == 2);  // x^2+1 = (x+1)^2
  CHECK(eucl::quotient_size(x3p1) == 8);
  CHECK(eucl::euler_phi(x3p1) == 3);
  CHECK(eucl::mobius(x3p1) == 1);
  CHECK(eucl::mobius(P({1, 1, 1})) == -1);
  CHECK(eucl::mobius(P({1, 0, 1})) == 0);
}

TEST_CASE("factorization is sorted with normalized primes") {
  auto f = eucl::factorize(RingElem::integer(360));
  REQUIRE(f.factors.size() == 3);
  CHECK(f.factors[0].first.int_value() == 2);
  CHECK(f.factors[0].second == 3);
  CHECK(f.factors[1].first.int_value() == 3);
  CHECK(f.factors[1].second == 2);
  CHECK(f.factors[2].first.int_value() == 5);
  CHECK(f.factors[2].second == 1);

  auto F2 = FqCtx::prime(2);
  auto g = eucl::factorize(RingElem::poly(fq_from_coeffs(F2, {1, 0, 0, 0, 0, 0, 1})));
  // x^6+1 = (x+1)^2 (x^2+x+1)^2 over F_2
  REQUIRE(g.factors.size() == 2);
  CHECK(g.factors[0].first.str() == "x+1");
  CHECK(g.factors[0].second == 2);
  CHECK(g.factors[1].first.str() == "x^2+x+1");
  CHECK(g.factors[1].second == 2);
}

TEST_CASE("divisor-sum identity agrees with an independent re-summation") {
  for (long n : {24L, 360L, 728L}) {
    auto divs = eucl::divisors(RingElem::integer(n));
    for (const auto& r : divs)
      for (const auto& nn : divs) {
        auto res = eucl::T_identity(r, nn);
        CHECK(res.sum_side == mpq_class(res.closed_side));
        long rl = res.alpha.int_value().get_si();  // touch fields
        (void)rl;
        CHECK(res.sum_side == oracle::T_sum_int(r.int_value().get_si(),
                                                nn.int_value().get_si()));
        CHECK(res.closed_side == oracle::T_closed_int(r.int_value().get_si(),
                                                      nn.int_value().get_si()));
      }
  }
}

TEST_CASE("divisor-sum identity pinned values") {
  auto I = [](long v) { return RingElem::integer(v); };
  CHECK(eucl::T_identity(I(4), I(2)).closed_side == 4);
  CHECK(eucl::T_identity(I(12), I(1)).closed_side == 4);
  // coprime prime-power scalar: the sum collapses to 2
  CHECK(eucl::T_identity(I(9), I(4)).closed_side == 2);
  CHECK(eucl::T_identity(I(8), I(3)).closed_side == 2);

  auto F2 = FqCtx::prime(2);
  RingElem x3p1 = RingElem::poly(fq_from_coeffs(F2, {1, 0, 0, 1}));
  RingElem xp1 = RingElem::poly(fq_from_coeffs(F2, {1, 1}));
  auto res = eucl::T_identity(x3p1, xp1);
  CHECK(res.closed_side == 4);
  CHECK(res.alpha == xp1);
  CHECK(res.beta.str() == "x^2+x+1");
}

TEST_CASE("divisor-sum identity across polynomial divisor pairs") {
  auto F3 = FqCtx::prime(3);
  // x^4 - 1 = (x+1)(x+2)(x^2+1) over F_3
  RingElem f = RingElem::poly(fq_from_coeffs(F3, {2, 0, 0, 0, 1}));
  auto divs = eucl::divisors(f);
  REQUIRE(divs.size() == 8);
  for (const auto& r : divs)
    for (const auto& n : divs) {
      auto res = eucl::T_identity(r, n);
      CHECK(res.sum_side == mpq_class(res.closed_side));
    }
}

TEST_CASE("mixed-ring arithmetic is rejected") {
  auto F2 = FqCtx::prime(2);
  RingElem a = RingElem::integer(6);
  RingElem b = RingElem::poly(fq_from_coeffs(F2, {1, 1}));
  CHECK_THROWS_AS((void)eucl::gcd_n(a, b), std::domain_error);
  CHECK_THROWS_AS((void)eucl::mul(a, b), std::domain_error);
}
