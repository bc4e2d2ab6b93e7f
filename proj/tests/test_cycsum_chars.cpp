#include <doctest.h>

#include "freefield/chars.hpp"
#include "freefield/cycsum.hpp"
#include "freefield/errors.hpp"
#include "freefield/eucl.hpp"
#include "freefield/gf.hpp"
#include "freefield/modctx.hpp"
#include "oracles.hpp"

using namespace freefield;
using chars::CycSum;

TEST_CASE("small cyclotomic polynomials come out exactly") {
  auto as_longs = [](const std::vector<mpz_class>& v) {
    std::vector<long> out;
    for (const auto& c : v) out.push_back(c.get_si());
    return out;
  };
  CHECK(as_longs(chars::cyclotomic_poly(1)) == std::vector<long>{-1, 1});
  CHECK(as_longs(chars::cyclotomic_poly(2)) == std::vector<long>{1, 1});
  CHECK(as_longs(chars::cyclotomic_poly(4)) == std::vector<long>{1, 0, 1});
  CHECK(as_longs(chars::cyclotomic_poly(6)) == std::vector<long>{1, -1, 1});
  CHECK(as_longs(chars::cyclotomic_poly(12)) ==
        std::vector<long>{1, 0, -1, 0, 1});
}

TEST_CASE("cyclotomic degrees equal the totient") {
  for (uint64_t n = 1; n <= 60; ++n)
    CHECK(chars::cyclotomic_poly(n).size() - 1 ==
          (size_t)oracle::phi_int((long)n));
}

TEST_CASE("full root sums vanish and inverse roots multiply to one") {
  for (uint64_t N : {6ull, 8ull, 12ull, 15ull}) {
    CycSum s(N);
    for (uint64_t e = 0; e < N; ++e) s.add_root(e);
    CHECK(s.eq_rational(0));
    for (uint64_t e = 1; e < N; ++e) {
      CycSum prod = CycSum::root(N, e) * CycSum::root(N, N - e);
      CHECK(prod.eq_rational(1));
    }
  }
}

TEST_CASE("primitive cube roots sum to minus one") {
  CycSum s(3);
  s.add_root(1);
  s.add_root(2);
  CHECK(s.eq_rational(-1));
  CHECK(!s.eq_rational(0));
}

TEST_CASE("integer detection and numeric magnitude") {
  CycSum s(8);
  s.add_root(1);
  s.add_root(7);  // zeta_8 + zeta_8^-1 = sqrt(2), not rational
  mpz_class out;
  CHECK(!s.as_integer(out));
  CHECK(s.abs_value() == doctest::Approx(1.41421356).epsilon(1e-6));

  CycSum t(8);
  t.add_root(2);
  t.add_root(6);  // i + (-i) = 0
  CHECK(t.as_integer(out));
  CHECK(out == 0);

  CycSum c = CycSum::constant(12, 5);
  CHECK(c.eq_rational(5));
}

TEST_CASE("arithmetic respects support compression") {
  // the same value expressed at root order 12 and at root order 3
  CycSum a(12);
  a.add_root(4);  // zeta_12^4 = zeta_3
  CycSum b = CycSum::root(12, 8);
  CycSum s = a + b;  // zeta_3 + zeta_3^2 = -1
  CHECK(s.eq_rational(-1));
  CycSum direct(3);
  direct.add_root(1);
  direct.add_root(2);
  CHECK(s.eq(direct));
  CHECK(chars::cyc_eq_rational(direct, mpq_class(-1)));
  CHECK(s.times_root(6).eq_rational(1));  // multiply by zeta_12^6 = -1
}

TEST_CASE("character evaluation matches the raw exponent tables") {
  auto field = gf::build_field(3, 1, 2);
  auto mod = modfree::build_mult_module(field);
  auto chi = chars::make_character(mod, 1);
  uint64_t N = mod->cyc_modulus();
  uint64_t scale = N / mod->char_root_order();
  for (uint64_t elem : mod->carrier()) {
    CycSum expect(N);
    expect.add_root(mod->char_value_exp(1, elem) * scale % N);
    CHECK(chars::char_eval(chi, elem).eq(expect));
  }
}

TEST_CASE("characters are homomorphisms") {
  auto field = gf::build_field(2, 1, 3);
  auto mod = modfree::build_mult_module(field);
  auto chi = chars::make_character(mod, 3);
  const auto& carrier = mod->carrier();
  for (uint64_t a : carrier)
    for (uint64_t b : carrier) {
      uint64_t ab = (gf::make_elem(field, a) * gf::make_elem(field, b)).idx;
      CycSum lhs = chars::char_eval(chi, ab);
      CycSum rhs = chars::char_eval(chi, a) * chars::char_eval(chi, b);
      CHECK(lhs.eq(rhs));
    }
}

TEST_CASE("character rows sum to zero unless trivial") {
  auto field = gf::build_field(3, 1, 2);
  for (auto mod : {modfree::build_mult_module(field),
                   modfree::build_add_module(field)}) {
    for (uint64_t j : {0ull, 1ull, 2ull}) {
      auto chi = chars::make_character(mod, j);
      CycSum row(mod->cyc_modulus());
      for (uint64_t elem : mod->carrier()) row += chars::char_eval(chi, elem);
      if (chi.is_trivial())
        CHECK(row.eq_rational(mpq_class(mpz_class(mod->size()))));
      else
        CHECK(row.eq_rational(0));
    }
  }
}

TEST_CASE("order classes of characters have totient size") {
  auto field = gf::build_field(2, 1, 3);
  for (auto mod : {modfree::build_mult_module(field),
                   modfree::build_add_module(field)}) {
    size_t total = 0;
    for (const auto& t : mod->exponent_divisors()) {
      auto cls = chars::chars_of_order(mod, t);
      CHECK(mpz_class((unsigned long)cls.size()) == eucl::euler_phi(t));
      for (const auto& chi : cls) CHECK(chars::char_order(chi) == t);
      total += cls.size();
    }
    CHECK(total == mod->num_characters());
  }
}

TEST_CASE("subgroup character sums hit exactly the two allowed values") {
  auto field = gf::build_field(3, 1, 2);
  auto mod = modfree::build_mult_module(field);
  for (const auto& t : mod->exponent_divisors()) {
    eucl::RingElem K = eucl::div_exact(mod->exponent(), t);
    mpz_class qs = eucl::quotient_size(t);
    for (uint64_t elem : mod->carrier()) {
      mpz_class total = 0;
      for (const auto& d : eucl::divisors(t))
        total += mod->order_char_sum(d, elem);
      bool member = eucl::divides(mod->element_order(elem), K);
      CHECK(total == (member ? qs : mpz_class(0)));
    }
  }
}
