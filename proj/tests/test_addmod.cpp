#include <doctest.h>

#include <map>

#include "freefield/addmod.hpp"
#include "freefield/errors.hpp"
#include "freefield/eucl.hpp"
#include "freefield/gf.hpp"

using namespace freefield;
using eucl::RingElem;

namespace {

RingElem P(const std::shared_ptr<const FqCtx>& f, std::vector<uint64_t> c) {
  return RingElem::poly(fq_from_coeffs(f, std::move(c)));
}

}  // namespace

TEST_CASE("the conventional form of an operator spreads coefficients to q-power slots") {
  auto field = gf::build_field(2, 1, 3);
  auto base = field->base_field();
  // x^2 + x + 1 acts as y^4 + y^2 + y
  auto L = addmod::q_associate(P(base, {1, 1, 1}));
  FqPoly conv = addmod::conventional_form(L, field);
  CHECK(conv.coeffs == std::vector<uint64_t>{0, 1, 1, 0, 1});
}

TEST_CASE("operator application equals the dense evaluation") {
  auto field = gf::build_field(3, 1, 2);
  auto base = field->base_field();
  for (const auto& f :
       {P(base, {1, 1}), P(base, {2, 0, 1}), P(base, {0, 1}), P(base, {2})}) {
    FqPoly conv = addmod::conventional_form(addmod::q_associate(f), field);
    for (uint64_t idx = 0; idx < field->order(); ++idx) {
      auto via_op = addmod::apply_linearized(f, gf::make_elem(field, idx));
      CHECK(via_op.idx == fq_eval(conv, idx));
    }
  }
}

TEST_CASE("operators are additive in the argument") {
  auto field = gf::build_field(2, 1, 3);
  auto base = field->base_field();
  RingElem f = P(base, {1, 0, 1});
  const auto& ext = field->ext_field();
  for (uint64_t a = 0; a < 8; ++a)
    for (uint64_t b = 0; b < 8; ++b) {
      uint64_t lhs =
          addmod::apply_linearized(f, gf::make_elem(field, ext->add(a, b))).idx;
      uint64_t rhs = ext->add(
          addmod::apply_linearized(f, gf::make_elem(field, a)).idx,
          addmod::apply_linearized(f, gf::make_elem(field, b)).idx);
      CHECK(lhs == rhs);
    }
}

TEST_CASE("additive orders are minimal annihilators") {
  auto field = gf::build_field(2, 1, 3);
  CHECK(addmod::fq_order(gf::make_elem(field, 0)).is_one());
  for (uint64_t idx = 0; idx < field->order(); ++idx) {
    auto alpha = gf::make_elem(field, idx);
    RingElem d = addmod::fq_order(alpha);
    CHECK(addmod::apply_linearized(d, alpha).is_zero());
    for (const auto& e : eucl::divisors(d))
      if (e != d) CHECK(!addmod::apply_linearized(e, alpha).is_zero());
  }
}

TEST_CASE("order census over the divisors of the splitting modulus") {
  for (auto [p, m] : {std::pair<int, int>{2, 3}, {3, 2}, {2, 4}}) {
    auto field = gf::build_field(p, 1, m);
    std::map<RingElem, long, eucl::RingElemLess> census;
    for (uint64_t idx = 0; idx < field->order(); ++idx)
      ++census[addmod::fq_order(gf::make_elem(field, idx))];
    long total = 0;
    for (const auto& d : field->splitting_modulus_divisors()) {
      CHECK(mpz_class(census[d]) == eucl::euler_phi(d));
      total += census[d];
    }
    CHECK(total == (long)field->order());
  }
}

TEST_CASE("normal element counts for two pinned towers") {
  auto f8 = gf::build_field(2, 1, 3);
  long normals = 0;
  for (uint64_t idx = 0; idx < f8->order(); ++idx)
    if (addmod::normal_test(gf::make_elem(f8, idx))) ++normals;
  CHECK(normals == 3);

  auto f9 = gf::build_field(3, 1, 2);
  normals = 0;
  for (uint64_t idx = 0; idx < f9->order(); ++idx)
    if (addmod::normal_test(gf::make_elem(f9, idx))) ++normals;
  CHECK(normals == 4);
}

TEST_CASE("normality coincides with a full additive order") {
  auto field = gf::build_field(2, 2, 2);  // F_16 over F_4
  for (uint64_t idx = 0; idx < field->order(); ++idx) {
    auto alpha = gf::make_elem(field, idx);
    CHECK(addmod::normal_test(alpha) ==
          (addmod::fq_order(alpha) == field->splitting_modulus()));
  }
}

TEST_CASE("operators over the wrong coefficient field are rejected") {
  auto field = gf::build_field(2, 1, 3);
  auto wrong = FqCtx::prime(3);
  RingElem f = P(wrong, {1, 1});
  CHECK_THROWS_AS(addmod::apply_linearized(f, gf::make_elem(field, 1)),
                  std::domain_error);
}
