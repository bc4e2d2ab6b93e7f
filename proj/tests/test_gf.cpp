#include <doctest.h>

#include <map>
#include <numeric>

#include "freefield/errors.hpp"
#include "freefield/gf.hpp"

using namespace freefield;

TEST_CASE("the field of nine elements gets the expected modulus and generator") {
  auto ctx = gf::build_field(3, 1, 2);
  CHECK(ctx->q() == 3);
  CHECK(ctx->order() == 9);
  CHECK(ctx->group_order() == 8);
  // smallest monic irreducible of degree 2 over F_3 in enumeration order
  CHECK(ctx->ext_modulus().coeffs == std::vector<uint64_t>{1, 0, 1});
  // smallest primitive element is t + 1, packed index 4
  CHECK(ctx->generator_idx() == 4);
  CHECK(ctx->mult_order_idx(ctx->generator_idx()) == 8);
}

TEST_CASE("the field of eight elements gets the expected modulus and generator") {
  auto ctx = gf::build_field(2, 1, 3);
  CHECK(ctx->ext_modulus().coeffs == std::vector<uint64_t>{1, 1, 0, 1});
  CHECK(ctx->generator_idx() == 2);  // t itself is primitive
  CHECK(ctx->mult_order_idx(2) == 7);
}

TEST_CASE("discrete logs invert exponentiation everywhere") {
  auto ctx = gf::build_field(3, 1, 2);
  auto g = gf::make_elem(ctx, ctx->generator_idx());
  for (uint64_t idx = 1; idx < ctx->order(); ++idx) {
    uint64_t k = ctx->dlog_idx(idx);
    CHECK(gf::ff_pow(g, mpz_class((unsigned long)k)).idx == idx);
    // order from the dlog: group_order / gcd
    uint64_t ord = ctx->mult_order_idx(idx);
    CHECK((ctx->group_order() / std::gcd(ctx->group_order(), k)) == ord);
  }
}

TEST_CASE("frobenius agrees with plain powering") {
  auto ctx = gf::build_field(2, 1, 3);
  for (uint64_t idx = 0; idx < ctx->order(); ++idx) {
    auto a = gf::make_elem(ctx, idx);
    CHECK(ctx->frobenius_q_idx(idx) == gf::ff_pow(a, mpz_class(2)).idx);
    CHECK(ctx->pth_power_idx(idx) == ctx->frobenius_q_idx(idx));
    CHECK(ctx->pth_root_idx(ctx->pth_power_idx(idx)) == idx);
    // full orbit closes after m steps
    uint64_t w = idx;
    for (int i = 0; i < 3; ++i) w = ctx->frobenius_q_idx(w);
    CHECK(w == idx);
  }
}

TEST_CASE("traces are balanced over the prime field") {
  auto ctx = gf::build_field(3, 1, 2);
  std::map<uint32_t, int> hist;
  for (uint64_t idx = 0; idx < ctx->order(); ++idx) ++hist[ctx->trace_idx(idx)];
  REQUIRE(hist.size() == 3);
  for (auto& [v, c] : hist) CHECK(c == 3);
}

TEST_CASE("a proper tower works the same way as a prime-field base") {
  auto ctx = gf::build_field(2, 2, 2);  // F_16 over F_4
  CHECK(ctx->q() == 4);
  CHECK(ctx->order() == 16);
  CHECK(ctx->base_degree() == 2);
  CHECK(fq_deg(ctx->base_modulus()) == 2);
  CHECK(fq_deg(ctx->ext_modulus()) == 2);
  CHECK(fq_is_irreducible(ctx->ext_modulus()));
  CHECK(ctx->mult_order_idx(ctx->generator_idx()) == 15);
  // q-power Frobenius fixes exactly the base field copy
  int fixed = 0;
  for (uint64_t idx = 0; idx < 16; ++idx)
    if (ctx->frobenius_q_idx(idx) == idx) ++fixed;
  CHECK(fixed == 4);
}

TEST_CASE("divisor tables for the group order and the splitting modulus") {
  auto ctx = gf::build_field(2, 2, 2);
  auto gd = ctx->group_order_divisors();
  REQUIRE(gd.size() == 4);  // 1, 3, 5, 15
  CHECK(gd[0].int_value() == 1);
  CHECK(gd[3].int_value() == 15);
  // x^2 - 1 = (x+1)^2 over F_4
  auto xd = ctx->splitting_modulus_divisors();
  REQUIRE(xd.size() == 3);
  CHECK(xd[0].is_one());
  CHECK(xd[1].str() == "x+1");
  CHECK(xd[2] == ctx->splitting_modulus());
}

TEST_CASE("construction refuses fields beyond the cap") {
  try {
    gf::build_field(2, 1, 25, 1u << 20);
    FAIL("expected the cap to reject 2^25");
  } catch (const CapExceeded& e) {
    CHECK(e.requested() == (1ull << 25));
    CHECK(e.cap() == (1ull << 20));
  }
}

TEST_CASE("find_irreducible picks the canonical smallest polynomial") {
  auto F2 = FqCtx::prime(2);
  CHECK(gf::find_irreducible(F2, 3).coeffs == std::vector<uint64_t>{1, 1, 0, 1});
  auto F3 = FqCtx::prime(3);
  CHECK(gf::find_irreducible(F3, 2).coeffs == std::vector<uint64_t>{1, 0, 1});
}
