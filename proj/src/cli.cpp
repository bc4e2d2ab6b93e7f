#include "freefield/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>

#include "freefield/addmod.hpp"
#include "freefield/chars.hpp"
#include "freefield/cycsum.hpp"
#include "freefield/errors.hpp"
#include "freefield/eucl.hpp"
#include "freefield/gf.hpp"
#include "freefield/modctx.hpp"
#include "freefield/modfree.hpp"
#include "freefield/polyvalues.hpp"

namespace freefield::cli {

namespace {

using nlohmann::ordered_json;
using modfree::ModuleCtx;

constexpr const char* kSchemaVersion = "freefield-report/1";
constexpr uint64_t kDefaultSeed = 20260823;
constexpr uint64_t kMaxExponent = 100000;

// ---------------------------------------------------------------- parsing

bool is_digit(char c) { return c >= '0' && c <= '9'; }

struct PolyParser {
  const std::string& s;
  const std::shared_ptr<const FqCtx>& field;
  size_t i = 0;

  void skip_ws() {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
  }

  bool at_end() {
    skip_ws();
    return i >= s.size();
  }

  uint64_t parse_plain_uint(const char* what) {
    skip_ws();
    size_t start = i;
    if (i >= s.size() || !is_digit(s[i]))
      throw ParseError(std::string("expected ") + what, i);
    uint64_t v = 0;
    while (i < s.size() && is_digit(s[i])) {
      uint64_t dgt = static_cast<uint64_t>(s[i] - '0');
      if (v > (kMaxExponent - dgt) / 10)
        throw ParseError(std::string(what) + " overflow", start);
      v = v * 10 + dgt;
      ++i;
    }
    return v;
  }

  /// Integer literal reduced modulo the characteristic on the fly.
  uint64_t parse_int_coeff() {
    skip_ws();
    size_t start = i;
    if (i >= s.size() || !is_digit(s[i]))
      throw ParseError("expected coefficient", i);
    uint64_t p = field->p();
    uint64_t v = 0;
    while (i < s.size() && is_digit(s[i])) {
      v = (v * 10 + static_cast<uint64_t>(s[i] - '0')) % p;
      ++i;
    }
    (void)start;
    return v;  // prime-subfield element index
  }

  uint64_t parse_bracket_coeff() {
    skip_ws();
    size_t open = i;
    ++i;  // '['
    std::vector<uint64_t> digits;
    uint64_t digit_limit =
        field->is_prime_field() ? field->p() : field->base()->q();
    for (;;) {
      skip_ws();
      size_t dstart = i;
      if (i >= s.size() || !is_digit(s[i]))
        throw ParseError("expected digit in coefficient literal", i);
      uint64_t v = 0;
      while (i < s.size() && is_digit(s[i])) {
        uint64_t dgt = static_cast<uint64_t>(s[i] - '0');
        if (v > (digit_limit + 10)) {  // past any valid digit; stop growing
          v = digit_limit;             // force the range error below
          ++i;
          continue;
        }
        v = v * 10 + dgt;
        ++i;
      }
      if (v >= digit_limit)
        throw ParseError("coefficient digit out of base-field range", dstart);
      digits.push_back(v);
      skip_ws();
      if (i < s.size() && s[i] == ',') {
        ++i;
        continue;
      }
      break;
    }
    if (i >= s.size() || s[i] != ']')
      throw ParseError("unterminated coefficient literal", i);
    ++i;
    if (digits.size() > field->degree())
      throw ParseError("coefficient literal of wrong length", open);
    digits.resize(field->degree(), 0);
    return field->pack(digits);
  }

  uint64_t parse_coeff() {
    skip_ws();
    if (i < s.size() && s[i] == '[') return parse_bracket_coeff();
    return parse_int_coeff();
  }

  FqPoly run() {
    std::map<size_t, uint64_t> acc;
    bool first = true;
    for (;;) {
      skip_ws();
      bool negate = false;
      if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
        negate = s[i] == '-';
        ++i;
      } else if (!first) {
        if (i >= s.size()) break;
        throw ParseError("expected '+', '-' or end of input", i);
      }
      skip_ws();
      if (i >= s.size()) throw ParseError("expected term", i);

      uint64_t coeff = 1;
      bool have_var = false;
      size_t expnt = 0;
      if (s[i] == 'x' || s[i] == 'y') {
        have_var = true;
        ++i;
      } else {
        coeff = parse_coeff();
        skip_ws();
        if (i < s.size() && s[i] == '*') {
          ++i;
          skip_ws();
          if (i >= s.size() || (s[i] != 'x' && s[i] != 'y'))
            throw ParseError("expected variable after '*'", i);
          have_var = true;
          ++i;
        }
      }
      if (have_var) {
        expnt = 1;
        skip_ws();
        if (i < s.size() && s[i] == '^') {
          ++i;
          expnt = static_cast<size_t>(parse_plain_uint("exponent"));
        }
      }
      if (negate) coeff = field->neg(coeff);
      uint64_t& slot = acc[expnt];
      slot = field->add(slot, coeff);
      first = false;
      if (at_end()) break;
    }
    if (first) throw ParseError("empty polynomial", i);
    size_t deg = 0;
    for (const auto& [e, c] : acc)
      if (c != 0 && e > deg) deg = e;
    std::vector<uint64_t> coeffs(deg + 1, 0);
    for (const auto& [e, c] : acc)
      if (e <= deg) coeffs[e] = c;
    return fq_from_coeffs(field, coeffs);
  }
};

}  // namespace

FqPoly parse_poly(const std::string& text,
                  const std::shared_ptr<const FqCtx>& field) {
  PolyParser pp{text, field};
  return pp.run();
}

std::string render_poly(const FqPoly& p) { return fq_to_string(p, "x"); }

namespace {

// ------------------------------------------------------------ JSON helpers

ordered_json coeff_array(const FqPoly& p) {
  ordered_json a = ordered_json::array();
  for (uint64_t c : p.coeffs) a.push_back(c);
  return a;
}

ordered_json num_json(const mpz_class& z) {
  if (z.fits_slong_p()) return static_cast<int64_t>(z.get_si());
  return z.get_str();
}

std::string rat_str(const mpq_class& v) { return v.get_str(); }

ordered_json field_json(const std::shared_ptr<const gf::FieldCtx>& field) {
  ordered_json j;
  j["p"] = field->p();
  j["base_degree"] = field->base_degree();
  j["ext_degree"] = field->ext_degree();
  j["q"] = field->q();
  j["order"] = field->order();
  j["base_modulus"] = coeff_array(field->base_modulus());
  j["ext_modulus"] = coeff_array(field->ext_modulus());
  return j;
}

std::string elem_str(const std::shared_ptr<const gf::FieldCtx>& field,
                     uint64_t idx) {
  FqPoly digits{field->base_field(), field->ext_field()->unpack(idx)};
  fq_normalize(digits);
  return fq_to_string(digits, "g");
}

ordered_json elem_json(const std::shared_ptr<const gf::FieldCtx>& field,
                       uint64_t idx) {
  ordered_json j;
  j["index"] = idx;
  ordered_json d = ordered_json::array();
  for (uint64_t c : field->ext_field()->unpack(idx)) d.push_back(c);
  j["digits"] = d;
  j["element"] = elem_str(field, idx);
  return j;
}

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

void run_check(std::vector<Check>& out, const std::string& name,
               const std::function<std::string()>& body) {
  try {
    std::string detail = body();
    out.push_back({name, true, detail});
  } catch (const std::exception& e) {
    out.push_back({name, false, e.what()});
  }
}

ordered_json checks_json(std::vector<Check> checks) {
  std::sort(checks.begin(), checks.end(),
            [](const Check& a, const Check& b) { return a.name < b.name; });
  ordered_json arr = ordered_json::array();
  for (const auto& c : checks) {
    ordered_json j;
    j["name"] = c.name;
    j["status"] = c.pass ? "pass" : "fail";
    j["detail"] = c.detail;
    arr.push_back(j);
  }
  return arr;
}

bool all_pass(const std::vector<Check>& checks) {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

// ------------------------------------------------------------ ring parsing

eucl::RingElem parse_ring_int(const std::string& text) {
  if (text.empty()) throw ParseError("empty integer", 0);
  for (size_t k = 0; k < text.size(); ++k)
    if (!is_digit(text[k])) throw ParseError("expected integer", k);
  return eucl::RingElem::integer(mpz_class(text));
}

eucl::RingElem parse_ring_poly(const std::string& text,
                               const std::shared_ptr<const FqCtx>& base) {
  FqPoly p = parse_poly(text, base);
  if (fq_is_zero(p)) throw std::domain_error("zero is not a valid divisor");
  return eucl::RingElem::poly(p);
}

uint64_t default_cap_from_env() {
  const char* e = std::getenv("FREEFIELD_CAP");
  if (!e || !*e) return gf::kDefaultCap;
  char* end = nullptr;
  unsigned long long v = std::strtoull(e, &end, 10);
  if (!end || *end != '\0' || v == 0)
    throw std::domain_error("FREEFIELD_CAP must be a positive integer");
  return static_cast<uint64_t>(v);
}

// --------------------------------------------------------------- verify

uint64_t apply_poly_operator(const std::shared_ptr<const gf::FieldCtx>& field,
                             const FqPoly& A, uint64_t alpha) {
  const auto& ext = field->ext_field();
  uint64_t acc = 0;
  uint64_t pw = alpha;
  for (size_t k = 0; k < A.coeffs.size(); ++k) {
    if (k > 0) pw = field->frobenius_q_idx(pw);
    if (A.coeffs[k] != 0) acc = ext->add(acc, ext->scale(A.coeffs[k], pw));
  }
  return acc;
}

std::vector<Check> run_verify(const std::shared_ptr<const gf::FieldCtx>& field,
                              uint64_t seed) {
  std::vector<Check> cks;
  std::shared_ptr<const ModuleCtx> mult, add;
  const auto& ext = field->ext_field();
  const auto& base = field->base_field();

  auto need = [](const std::shared_ptr<const ModuleCtx>& m)
      -> const std::shared_ptr<const ModuleCtx>& {
    if (!m) throw std::runtime_error("skipped: module construction failed");
    return m;
  };

  run_check(cks, "module_structure", [&] {
    mult = modfree::build_mult_module(field);
    add = modfree::build_add_module(field);
    uint64_t g = mult->generator_elem();
    if (field->mult_order_idx(g) != field->group_order())
      throw IdentityViolation("module_structure", "generator order mismatch");
    if (!addmod::normal_test(gf::make_elem(field, add->generator_elem())))
      throw IdentityViolation("module_structure",
                              "additive generator is not normal");
    for (uint64_t idx : mult->carrier()) {
      uint64_t k = field->dlog_idx(idx);
      uint64_t back = gf::ff_pow(gf::make_elem(field, g), mpz_class(k)).idx;
      if (back != idx)
        throw IdentityViolation("module_structure",
                                "discrete log failed to invert at index " +
                                    std::to_string(idx));
    }
    return std::string("built both modules over F_") +
           std::to_string(field->order()) + ", discrete logs verified";
  });

  run_check(cks, "mobius_delta_integers", [&] {
    std::vector<eucl::RingElem> ns;
    for (long n = 1; n <= 60; ++n) ns.push_back(eucl::RingElem::integer(n));
    for (const auto& dv : field->group_order_divisors()) ns.push_back(dv);
    for (const auto& n : ns) {
      mpz_class sum = 0;
      for (const auto& dd : eucl::divisors(n)) sum += eucl::mobius(dd);
      if (sum != (n.is_one() ? 1 : 0))
        throw IdentityViolation(
            "mobius_delta_integers",
            "divisor sum of mu is not the unit indicator at " + n.str());
    }
    return "checked " + std::to_string(ns.size()) + " integers";
  });

  run_check(cks, "mobius_delta_polynomials", [&] {
    std::vector<eucl::RingElem> fs;
    fs.push_back(eucl::RingElem::poly(fq_const(base, 1)));
    for (uint32_t degree = 1; degree <= 3; ++degree) {
      uint64_t total = 1;
      for (uint32_t k = 0; k < degree; ++k) total *= base->q();
      uint64_t limit = std::min<uint64_t>(total, 200);
      for (uint64_t v = 0; v < limit; ++v) {
        std::vector<uint64_t> coeffs(degree + 1, 0);
        uint64_t w = v;
        for (uint32_t k = 0; k < degree; ++k) {
          coeffs[k] = w % base->q();
          w /= base->q();
        }
        coeffs[degree] = 1;
        fs.push_back(eucl::RingElem::poly(fq_from_coeffs(base, coeffs)));
      }
    }
    for (const auto& dv : field->splitting_modulus_divisors()) fs.push_back(dv);
    for (const auto& f : fs) {
      mpz_class sum = 0;
      for (const auto& dd : eucl::divisors(f)) sum += eucl::mobius(dd);
      if (sum != (f.is_one() ? 1 : 0))
        throw IdentityViolation(
            "mobius_delta_polynomials",
            "divisor sum of mu is not the unit indicator at " + f.str());
    }
    return "checked " + std::to_string(fs.size()) + " monic polynomials";
  });

  run_check(cks, "cyclotomic_degrees", [&] {
    size_t checked = 0;
    std::vector<uint64_t> ns{field->p()};
    for (const auto& dv : field->group_order_divisors())
      ns.push_back(dv.int_value().get_ui());
    for (uint64_t n : ns) {
      if (n > 100000) continue;
      auto phi = chars::cyclotomic_poly(n);
      mpz_class expect = eucl::euler_phi(eucl::RingElem::integer((long)n));
      if (mpz_class((unsigned long)(phi.size() - 1)) != expect)
        throw IdentityViolation("cyclotomic_degrees",
                                "degree mismatch at index " +
                                    std::to_string(n));
      ++checked;
    }
    return "checked " + std::to_string(checked) + " cyclotomic polynomials";
  });

  run_check(cks, "divisor_sum_closed_form_integers", [&] {
    const auto& divs = field->group_order_divisors();
    size_t n = 0;
    for (const auto& a : divs)
      for (const auto& b : divs) {
        eucl::T_identity(a, b);
        ++n;
      }
    return "verified " + std::to_string(n) + " divisor pairs of " +
           std::to_string(field->group_order());
  });

  run_check(cks, "divisor_sum_closed_form_polynomials", [&] {
    const auto& divs = field->splitting_modulus_divisors();
    size_t n = 0;
    for (const auto& a : divs)
      for (const auto& b : divs) {
        eucl::T_identity(a, b);
        ++n;
      }
    return "verified " + std::to_string(n) + " monic divisor pairs of " +
           field->splitting_modulus().str();
  });

  run_check(cks, "order_charfn_multiplicative", [&] {
    const auto& mm = need(mult);
    size_t evals = 0;
    std::map<uint64_t, mpq_class> partition;
    for (const auto& dv : field->group_order_divisors()) {
      uint64_t M = dv.int_value().get_ui();
      for (uint64_t elem : mm->carrier()) {
        partition[elem] += modfree::carlitz_psi(mm, elem, M);
        ++evals;
      }
    }
    for (const auto& [elem, total] : partition)
      if (total != 1)
        throw IdentityViolation("order_charfn_multiplicative",
                                "order indicators do not partition at " +
                                    std::to_string(elem));
    return std::to_string(evals) + " evaluations, partition of unity holds";
  });

  auto order_indicator_check = [&](const std::shared_ptr<const ModuleCtx>& mm,
                                   const char* name) {
    size_t evals = 0;
    std::map<uint64_t, mpq_class> partition;
    for (const auto& n : mm->exponent_divisors()) {
      for (uint64_t elem : mm->carrier()) {
        partition[elem] += modfree::order_indicator(mm, elem, n);
        ++evals;
      }
    }
    for (const auto& [elem, total] : partition)
      if (total != 1)
        throw IdentityViolation(name,
                                "order indicators do not partition at " +
                                    std::to_string(elem));
    return std::to_string(evals) + " evaluations, partition of unity holds";
  };
  run_check(cks, "order_indicator_multiplicative",
            [&] { return order_indicator_check(need(mult),
                                               "order_indicator_multiplicative"); });
  run_check(cks, "order_indicator_additive",
            [&] { return order_indicator_check(need(add),
                                               "order_indicator_additive"); });

  auto freeness_charfn_check = [&](const std::shared_ptr<const ModuleCtx>& mm) {
    size_t evals = 0;
    for (const auto& r : mm->exponent_divisors())
      for (const auto& n : mm->exponent_divisors()) {
        auto query = modfree::make_query(mm, r, n);
        for (uint64_t elem : mm->carrier()) {
          modfree::char_fn_free(mm, elem, query);
          ++evals;
        }
      }
    return std::to_string(evals) + " evaluations, all exact 0/1";
  };
  run_check(cks, "freeness_charfn_multiplicative",
            [&] { return freeness_charfn_check(need(mult)); });
  run_check(cks, "freeness_charfn_additive",
            [&] { return freeness_charfn_check(need(add)); });

  auto def_vs_gcd_check = [&](const std::shared_ptr<const ModuleCtx>& mm) {
    size_t queries = 0;
    for (const auto& r : mm->exponent_divisors())
      for (const auto& n : mm->exponent_divisors()) {
        modfree::enumerate_free(mm, modfree::make_query(mm, r, n), false);
        ++queries;
      }
    return std::to_string(queries) + " queries cross-checked element-wise";
  };
  run_check(cks, "freeness_def_vs_gcd_multiplicative",
            [&] { return def_vs_gcd_check(need(mult)); });
  run_check(cks, "freeness_def_vs_gcd_additive",
            [&] { return def_vs_gcd_check(need(add)); });

  auto orthogonality_check = [&](const std::shared_ptr<const ModuleCtx>& mm,
                                 const char* name) {
    size_t n = 0;
    for (const auto& t : mm->exponent_divisors()) {
      mpz_class qs = eucl::quotient_size(t);
      eucl::RingElem K = eucl::div_exact(mm->exponent(), t);
      auto sub_divs = eucl::divisors(t);
      for (uint64_t elem : mm->carrier()) {
        mpz_class total = 0;
        for (const auto& dd : sub_divs) total += mm->order_char_sum(dd, elem);
        bool in_image = eucl::divides(mm->element_order(elem), K);
        mpz_class expect = in_image ? qs : 0;
        if (total != expect)
          throw IdentityViolation(
              name, "subgroup character sum off at element " +
                        std::to_string(elem) + ", divisor " + t.str());
        ++n;
      }
    }
    return std::to_string(n) + " (divisor, element) sums, both branches hit";
  };
  run_check(cks, "character_orthogonality_multiplicative",
            [&] { return orthogonality_check(need(mult),
                                             "character_orthogonality_multiplicative"); });
  run_check(cks, "character_orthogonality_additive",
            [&] { return orthogonality_check(need(add),
                                             "character_orthogonality_additive"); });

  run_check(cks, "char_class_sizes", [&] {
    size_t n = 0;
    for (const auto& mm : {need(mult), need(add)})
      for (const auto& t : mm->exponent_divisors()) {
        if (mpz_class((unsigned long)mm->chars_with_order(t).size()) !=
            eucl::euler_phi(t))
          throw IdentityViolation("char_class_sizes",
                                  "character class size off at " + t.str());
        ++n;
      }
    return std::to_string(n) + " dual order classes sized by the totient";
  });

  auto image_sets_check = [&](const std::shared_ptr<const ModuleCtx>& mm) {
    size_t n = 0;
    for (const auto& r : mm->exponent_divisors())
      for (const auto& b : mm->exponent_divisors()) {
        modfree::image_order_set(mm, r, b);
        ++n;
      }
    return std::to_string(n) + " (scalar, order) image sets matched";
  };
  run_check(cks, "image_order_sets_multiplicative",
            [&] { return image_sets_check(need(mult)); });
  run_check(cks, "image_order_sets_additive",
            [&] { return image_sets_check(need(add)); });

  run_check(cks, "additive_order_census", [&] {
    need(add);
    std::map<eucl::RingElem, mpz_class, eucl::RingElemLess> census;
    for (uint64_t elem : add->carrier())
      census[addmod::fq_order(gf::make_elem(field, elem))] += 1;
    mpz_class total = 0;
    for (const auto& d : field->splitting_modulus_divisors()) {
      if (census[d] != eucl::euler_phi(d))
        throw IdentityViolation("additive_order_census",
                                "order census off at " + d.str());
      total += census[d];
    }
    if (total != mpz_class((unsigned long)field->order()))
      throw IdentityViolation("additive_order_census",
                              "census does not cover the field");
    return "each divisor's order class has totient size";
  });

  run_check(cks, "normal_census", [&] {
    need(add);
    mpz_class normals = 0;
    for (uint64_t elem : add->carrier())
      if (addmod::normal_test(gf::make_elem(field, elem))) normals += 1;
    mpz_class expect = eucl::euler_phi(field->splitting_modulus());
    if (normals != expect)
      throw IdentityViolation("normal_census",
                              "normal count " + normals.get_str() +
                                  " != " + expect.get_str());
    return normals.get_str() + " normal elements, matching the totient";
  });

  run_check(cks, "free_census_generators", [&] {
    auto one_int = eucl::RingElem::integer(1);
    auto mrep = modfree::enumerate_free(
        need(mult),
        modfree::make_query(mult, eucl::RingElem::integer(
                                      mpz_class((unsigned long)field->group_order())),
                            one_int),
        false);
    if (mpz_class(mrep.count) !=
        eucl::euler_phi(eucl::RingElem::integer(
            mpz_class((unsigned long)field->group_order()))))
      throw IdentityViolation("free_census_generators",
                              "primitive census mismatch");
    auto one_poly = eucl::RingElem::poly(fq_const(base, 1));
    auto arep = modfree::enumerate_free(
        need(add),
        modfree::make_query(add, field->splitting_modulus(), one_poly), false);
    if (mpz_class(arep.count) != eucl::euler_phi(field->splitting_modulus()))
      throw IdentityViolation("free_census_generators",
                              "normal (free) census mismatch");
    return "free counts match the unit-group sizes on both modules";
  });

  run_check(cks, "linearized_operator_laws", [&] {
    need(add);
    std::mt19937_64 rng(seed ^ 0x11ce5a11u);
    std::vector<FqPoly> ops;
    for (const auto& d : field->splitting_modulus_divisors())
      ops.push_back(d.poly_value());
    for (int k = 0; k < 4; ++k) {
      uint32_t degree = 1 + static_cast<uint32_t>(rng() % field->ext_degree());
      std::vector<uint64_t> coeffs(degree + 1, 0);
      for (uint32_t j = 0; j <= degree; ++j) coeffs[j] = rng() % base->q();
      FqPoly r = fq_from_coeffs(base, coeffs);
      if (!fq_is_zero(r)) ops.push_back(r);
    }
    size_t n = 0;
    for (const auto& A : ops)
      for (const auto& B : ops) {
        FqPoly AB = fq_mul(A, B);
        FqPoly ApB = fq_add(A, B);
        for (uint64_t alpha : add->carrier()) {
          uint64_t lhs = apply_poly_operator(field, AB, alpha);
          uint64_t rhs = apply_poly_operator(
              field, A, apply_poly_operator(field, B, alpha));
          if (lhs != rhs)
            throw IdentityViolation("linearized_operator_laws",
                                    "composition law fails");
          uint64_t lhs2 = apply_poly_operator(field, ApB, alpha);
          uint64_t rhs2 = ext->add(apply_poly_operator(field, A, alpha),
                                   apply_poly_operator(field, B, alpha));
          if (lhs2 != rhs2)
            throw IdentityViolation("linearized_operator_laws",
                                    "additivity in the operator fails");
          ++n;
        }
      }
    for (int k = 0; k < 32; ++k) {
      const FqPoly& A = ops[rng() % ops.size()];
      uint64_t a = rng() % field->order();
      uint64_t b = rng() % field->order();
      if (apply_poly_operator(field, A, ext->add(a, b)) !=
          ext->add(apply_poly_operator(field, A, a),
                   apply_poly_operator(field, A, b)))
        throw IdentityViolation("linearized_operator_laws",
                                "additivity in the argument fails");
    }
    for (const auto& d : field->splitting_modulus_divisors()) {
      FqPoly conv = addmod::conventional_form(addmod::q_associate(d), field);
      for (uint64_t alpha : add->carrier()) {
        uint64_t via_dense = fq_eval(conv, alpha);
        uint64_t via_frob =
            addmod::apply_linearized(d, gf::make_elem(field, alpha)).idx;
        if (via_dense != via_frob ||
            via_frob != apply_poly_operator(field, d.poly_value(), alpha))
          throw IdentityViolation("linearized_operator_laws",
                                  "dense and iterated forms disagree");
      }
    }
    return std::to_string(n) + " composition/additivity cases";
  });

  run_check(cks, "gauss_sum_norm", [&] {
    const auto& mm = need(mult);
    const auto& am = need(add);
    uint64_t N = mm->cyc_modulus();
    uint64_t Q = field->group_order();
    uint64_t p = field->p();
    size_t n = 0;
    for (const auto& t : mm->exponent_divisors()) {
      uint64_t chi = t.is_one() ? 0 : mm->chars_with_order(t).front();
      chars::CycSum G(N), Gc(N);
      for (uint64_t omega : mm->carrier()) {
        uint64_t em = mm->char_value_exp(chi, omega);
        uint64_t ea = am->char_value_exp(1, omega);
        uint64_t e = (em * (N / Q) + ea * (N / p)) % N;
        G.add_root(e);
        Gc.add_root((N - e) % N);
      }
      if (t.is_one()) {
        if (!chars::cyc_eq_rational(G, mpq_class(-1)))
          throw IdentityViolation("gauss_sum_norm",
                                  "trivial-character sum is not -1");
      } else {
        chars::CycSum prod = G * Gc;
        if (!chars::cyc_eq_rational(
                prod, mpq_class(mpz_class((unsigned long)field->order()))))
          throw IdentityViolation("gauss_sum_norm",
                                  "norm is not the field order at order " +
                                      t.str());
      }
      ++n;
    }
    return std::to_string(n) + " character orders, norms exact";
  });

  run_check(cks, "artin_schreier_forms", [&] {
    uint64_t p = field->p();
    std::mt19937_64 rng(seed ^ 0xa57f0c3ull);
    for (int k = 0; k < 8; ++k) {
      uint32_t degree = 1 + static_cast<uint32_t>(rng() % 3);
      std::vector<uint64_t> coeffs(degree + 1, 0);
      for (uint32_t j = 0; j < degree; ++j) coeffs[j] = rng() % field->order();
      coeffs[degree] = 1 + rng() % (field->order() - 1);
      FqPoly a = fq_from_coeffs(ext, coeffs);
      FqPoly G = fq_add(fq_sub(fq_pow(a, p), a),
                        fq_const(ext, rng() % field->order()));
      if (!polyvalues::artin_schreier_test(field, G))
        throw IdentityViolation("artin_schreier_forms",
                                "constructed form not recognized");
    }
    for (size_t e = 2; e <= 5; ++e) {
      // monomials of degree 2..5 never decompose: either the degree is not
      // a multiple of p, or the subtracted copy leaves a lower term behind
      if (polyvalues::artin_schreier_test(field, fq_monomial(ext, e, 1)))
        throw IdentityViolation("artin_schreier_forms",
                                "monomial misclassified at degree " +
                                    std::to_string(e));
    }
    if (field->base_degree() == 1) {
      // q = p: the decomposition agrees with the operator route at x - 1
      FqPoly xm1 = fq_from_coeffs(base, {base->neg(1), 1});
      eucl::RingElem l = eucl::RingElem::poly(xm1);
      for (int k = 0; k < 12; ++k) {
        uint32_t degree = 1 + static_cast<uint32_t>(rng() % 6);
        std::vector<uint64_t> coeffs(degree + 1, 0);
        for (uint32_t j = 0; j <= degree; ++j)
          coeffs[j] = rng() % field->order();
        FqPoly G = fq_from_coeffs(ext, coeffs);
        if (fq_is_zero(G)) continue;
        bool via_as = polyvalues::artin_schreier_test(field, G);
        bool via_lf =
            polyvalues::linearized_form_test(field, G, l).has_value();
        if (via_as != via_lf)
          throw IdentityViolation("artin_schreier_forms",
                                  "the two decomposition routes disagree");
      }
    }
    return "constructed forms recognized, monomial negatives rejected";
  });

  run_check(cks, "pair_bound_sweep", [&] {
    const auto& am = need(add);
    std::vector<std::pair<FqPoly, FqPoly>> pairs;
    for (size_t a = 1; a <= 3; ++a)
      for (size_t b = 1; b <= 3; ++b)
        pairs.emplace_back(fq_monomial(ext, a, 1), fq_monomial(ext, b, 1));
    for (auto& pr : polyvalues::random_pairs(field, 5, 3, seed))
      pairs.push_back(pr);
    auto st = polyvalues::pair_sweep(am, pairs, 6);
    // Asserted: witness completeness and the aggregate character-sum
    // estimate, both of which every input must satisfy.  The per-report
    // root-excess bound and positivity claim have exact counterexamples and
    // are tallied, not asserted.
    if (st.witnesses_missing > 0)
      throw IdentityViolation("pair_bound_sweep",
                              "dependent pair without a zero-count witness");
    if (st.aggregate_violations > 0)
      throw IdentityViolation(
          "pair_bound_sweep",
          "aggregate character-sum estimate exceeded: " + st.first_violation);
    std::ostringstream os;
    os << st.reports << " reports (" << st.aggregate_checked
       << " aggregate estimates asserted, " << st.aggregate_skipped
       << " skipped for degenerate character pairs, " << st.bound_violations
       << " root-excess bound exceedances tallied, "
       << st.positivity_violations << " positivity misses tallied, "
       << st.corollary_hits << " positivity hits, " << st.dependent_configs
       << " dependent configs, " << st.witnesses_found << " witnesses)";
    return os.str();
  });

  return cks;
}

// ---------------------------------------------------------------- execute

struct CommandIO {
  ordered_json params;
  ordered_json result;
  std::vector<Check> checks;
  std::string csv;
};

}  // namespace

ExecResult execute(const std::vector<std::string>& args) {
  ExecResult res;

  CLI::App app{"exact arithmetic of free elements in finite cyclic modules"};
  app.name("freefield");
  app.fallthrough();
  app.require_subcommand(1);

  uint32_t p = 0, base_deg = 1, ext_deg = 1;
  uint64_t cap = 0;
  uint64_t seed = kDefaultSeed;
  bool timing = false;
  std::string out_path;
  app.add_option("--p", p, "field characteristic (prime)");
  app.add_option("--d", base_deg, "base field degree over the prime field")
      ->default_val(1);
  app.add_option("--m", ext_deg, "extension degree over the base field");
  app.add_option("--cap", cap,
                 "enumeration cap (default: FREEFIELD_CAP or 2^20)");
  app.add_option("--seed", seed, "seed for randomized sampling")
      ->default_val(kDefaultSeed);
  app.add_flag("--timing", timing, "include wall time in the report");
  app.add_option("--out", out_path, "write the payload to a file");

  auto* sc_field = app.add_subcommand("field", "field tower commands");
  sc_field->fallthrough();
  sc_field->require_subcommand(1);
  auto* sc_field_new =
      sc_field->add_subcommand("new", "build the tower and report it");
  sc_field_new->fallthrough();

  auto* sc_order =
      app.add_subcommand("order", "orders and normality of one element");
  sc_order->fallthrough();
  uint64_t elem_idx = 0;
  sc_order->add_option("--elem", elem_idx, "element index")->required();

  auto* sc_free = app.add_subcommand("free", "freeness queries");
  sc_free->fallthrough();
  sc_free->require_subcommand(1);
  auto* sc_free_enum =
      sc_free->add_subcommand("enum", "enumerate the free elements");
  sc_free_enum->fallthrough();
  bool use_mult = false, use_add = false, with_elements = false, csv = false;
  std::string r_text, n_text;
  sc_free_enum->add_flag("--mult", use_mult, "multiplicative module");
  sc_free_enum->add_flag("--add", use_add, "additive module");
  sc_free_enum->add_option("--r", r_text, "scalar r of the query")->required();
  sc_free_enum->add_option("--n", n_text, "scalar n of the query")->required();
  sc_free_enum->add_flag("--elements", with_elements,
                         "list the free elements in the report");
  sc_free_enum->add_flag("--csv", csv, "emit the elements as CSV rows");

  auto* sc_charfn =
      app.add_subcommand("charfn", "characteristic function values");
  sc_charfn->fallthrough();
  std::string fn_name, M_text;
  uint64_t charfn_elem = 0;
  sc_charfn->add_option("--fn", fn_name, "psi | lambda | omega")->required();
  sc_charfn->add_option("--elem", charfn_elem, "element index")->required();
  sc_charfn->add_option("--M", M_text, "multiplicative order (fn = psi)");
  sc_charfn->add_option("--r", r_text, "scalar r (fn = lambda | omega)");
  sc_charfn->add_option("--n", n_text, "scalar n (fn = lambda | omega)");

  auto* sc_pairs = app.add_subcommand("pairs", "polynomial pair analysis");
  sc_pairs->fallthrough();
  sc_pairs->require_subcommand(1);
  std::string h_text, H_text, f_text, F_text, rr_text, RR_text;
  uint32_t degree_cap = polyvalues::kDefaultDegreeCap;
  auto* sc_pairs_report =
      sc_pairs->add_subcommand("report", "count, error term and bound");
  sc_pairs_report->fallthrough();
  // The polynomial option --h needs the short help alias -h out of the way.
  sc_pairs_report->set_help_flag("--help", "print this help message and exit");
  sc_pairs_report->add_option("--h", h_text, "first polynomial")->required();
  sc_pairs_report->add_option("--H", H_text, "second polynomial")->required();
  sc_pairs_report->add_option("--f", f_text, "first freeness divisor")
      ->required();
  sc_pairs_report->add_option("--F", F_text, "second freeness divisor")
      ->required();
  sc_pairs_report->add_option("--r", rr_text, "first order scalar")
      ->required();
  sc_pairs_report->add_option("--R", RR_text, "second order scalar")
      ->required();
  sc_pairs_report->add_option("--degree-cap", degree_cap,
                              "largest accepted degree of h or H");
  auto* sc_pairs_witness = sc_pairs->add_subcommand(
      "witness", "zero-count scalars for a dependent pair");
  sc_pairs_witness->fallthrough();
  sc_pairs_witness->set_help_flag("--help", "print this help message and exit");
  sc_pairs_witness->add_option("--h", h_text, "first polynomial")->required();
  sc_pairs_witness->add_option("--H", H_text, "second polynomial")->required();
  sc_pairs_witness->add_option("--f", f_text, "first freeness divisor")
      ->required();
  sc_pairs_witness->add_option("--F", F_text, "second freeness divisor")
      ->required();
  sc_pairs_witness->add_option("--degree-cap", degree_cap,
                               "largest accepted degree of h or H");

  auto* sc_verify =
      app.add_subcommand("verify", "replay the full identity suite");
  sc_verify->fallthrough();

  std::string command;
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);

    if (cap == 0) cap = default_cap_from_env();
    if (p == 0) throw std::domain_error("--p is required");
    if (ext_deg == 0) throw std::domain_error("--m is required and positive");

    if (sc_field_new->parsed()) command = "field new";
    else if (sc_order->parsed()) command = "order";
    else if (sc_free_enum->parsed()) command = "free enum";
    else if (sc_charfn->parsed()) command = "charfn";
    else if (sc_pairs_report->parsed()) command = "pairs report";
    else if (sc_pairs_witness->parsed()) command = "pairs witness";
    else if (sc_verify->parsed()) command = "verify";
    else throw std::domain_error("no command selected");

    auto t0 = std::chrono::steady_clock::now();
    auto field = gf::build_field(p, base_deg, ext_deg, cap);
    const auto& base = field->base_field();
    const auto& ext = field->ext_field();

    CommandIO io;
    io.params = ordered_json::object();
    io.result = ordered_json::object();

    if (command == "field new") {
      uint64_t g = field->generator_idx();
      io.result["generator"] = elem_json(field, g);
      io.result["group_order"] = field->group_order();
      ordered_json factors = ordered_json::array();
      for (const auto& [pe, e] : field->group_order_factorization().factors)
        factors.push_back({num_json(pe.int_value()), e});
      io.result["group_order_factors"] = factors;
      io.result["splitting_modulus"] = field->splitting_modulus().str();
      ordered_json sp_factors = ordered_json::array();
      for (const auto& [pe, e] :
           eucl::factorize(field->splitting_modulus()).factors)
        sp_factors.push_back({pe.str(), e});
      io.result["splitting_modulus_factors"] = sp_factors;
      run_check(io.checks, "generator_order", [&] {
        if (field->mult_order_idx(g) != field->group_order())
          throw IdentityViolation("generator_order", "order mismatch");
        return "generator has full multiplicative order";
      });
      run_check(io.checks, "moduli_irreducible", [&] {
        if (!fq_is_irreducible(field->base_modulus()) ||
            !fq_is_irreducible(field->ext_modulus()))
          throw IdentityViolation("moduli_irreducible",
                                  "a tower modulus is reducible");
        return "both tower moduli are irreducible";
      });
    } else if (command == "order") {
      if (elem_idx >= field->order())
        throw std::domain_error("element index out of range");
      io.params["elem"] = elem_idx;
      io.result["element"] = elem_json(field, elem_idx);
      auto alpha = gf::make_elem(field, elem_idx);
      eucl::RingElem fq_ord = addmod::fq_order(alpha);
      if (elem_idx == 0)
        io.result["mult_order"] = nullptr;
      else
        io.result["mult_order"] = field->mult_order_idx(elem_idx);
      io.result["fq_order"] = fq_ord.str();
      io.result["normal"] = addmod::normal_test(alpha);
      run_check(io.checks, "order_divides_exponent", [&] {
        if (elem_idx != 0 &&
            field->group_order() % field->mult_order_idx(elem_idx) != 0)
          throw IdentityViolation("order_divides_exponent",
                                  "multiplicative order does not divide");
        if (!eucl::divides(fq_ord, field->splitting_modulus()))
          throw IdentityViolation("order_divides_exponent",
                                  "additive order does not divide");
        return "both orders divide their exponents";
      });
    } else if (command == "free enum") {
      if (use_mult == use_add)
        throw std::domain_error("choose exactly one of --mult / --add");
      std::shared_ptr<const ModuleCtx> mod =
          use_mult ? modfree::build_mult_module(field)
                   : modfree::build_add_module(field);
      eucl::RingElem r = use_mult ? parse_ring_int(r_text)
                                  : parse_ring_poly(r_text, base);
      eucl::RingElem n = use_mult ? parse_ring_int(n_text)
                                  : parse_ring_poly(n_text, base);
      auto query = modfree::make_query(mod, r, n);
      bool want_elems = with_elements || csv;
      auto report = modfree::enumerate_free(mod, query, want_elems);
      io.params["kind"] = use_mult ? "multiplicative" : "additive";
      io.params["r"] = r.str();
      io.params["n"] = n.str();
      io.result["count"] = report.count;
      io.result["cross_checked"] = report.cross_checked;
      if (want_elems && report.elements) {
        ordered_json elems = ordered_json::array();
        for (uint64_t e : *report.elements)
          elems.push_back(elem_json(field, e));
        io.result["elements"] = elems;
        if (csv) {
          std::ostringstream os;
          os << "index,element\n";
          for (uint64_t e : *report.elements)
            os << e << "," << elem_str(field, e) << "\n";
          io.csv = os.str();
        }
      }
      run_check(io.checks, "freeness_def_vs_gcd", [&] {
        if (!report.cross_checked)
          throw IdentityViolation("freeness_def_vs_gcd", "not cross-checked");
        return "both routes agreed on every element";
      });
    } else if (command == "charfn") {
      io.params["fn"] = fn_name;
      io.params["elem"] = charfn_elem;
      if (charfn_elem >= field->order())
        throw std::domain_error("element index out of range");
      mpq_class value;
      std::string check_name;
      if (fn_name == "psi") {
        if (M_text.empty()) throw std::domain_error("--M is required for psi");
        auto mod = modfree::build_mult_module(field);
        uint64_t M = parse_ring_int(M_text).int_value().get_ui();
        io.params["M"] = M;
        value = modfree::carlitz_psi(mod, charfn_elem, M);
        check_name = "order_charfn_binary";
      } else if (fn_name == "lambda" || fn_name == "omega") {
        if (r_text.empty() || n_text.empty())
          throw std::domain_error("--r and --n are required for " + fn_name);
        bool mult_kind = fn_name == "lambda";
        std::shared_ptr<const ModuleCtx> mod =
            mult_kind ? modfree::build_mult_module(field)
                      : modfree::build_add_module(field);
        eucl::RingElem r = mult_kind ? parse_ring_int(r_text)
                                     : parse_ring_poly(r_text, base);
        eucl::RingElem n = mult_kind ? parse_ring_int(n_text)
                                     : parse_ring_poly(n_text, base);
        io.params["r"] = r.str();
        io.params["n"] = n.str();
        value = modfree::char_fn_free(mod, charfn_elem,
                                      modfree::make_query(mod, r, n));
        check_name = "freeness_charfn_binary";
      } else {
        throw std::domain_error("--fn must be psi, lambda or omega");
      }
      io.result["value"] = rat_str(value);
      run_check(io.checks, check_name, [&] {
        if (value != 0 && value != 1)
          throw IdentityViolation(check_name, "value is not 0 or 1");
        return "value is exact and matches the direct computation";
      });
    } else if (command == "pairs report" || command == "pairs witness") {
      auto mod = modfree::build_add_module(field);
      FqPoly h = parse_poly(h_text, ext);
      FqPoly H = parse_poly(H_text, ext);
      eucl::RingElem f = parse_ring_poly(f_text, base);
      eucl::RingElem F = parse_ring_poly(F_text, base);
      io.params["h"] = render_poly(h);
      io.params["H"] = render_poly(H);
      io.params["f"] = f.str();
      io.params["F"] = F.str();
      io.params["degree_cap"] = degree_cap;
      if (command == "pairs report") {
        eucl::RingElem r = parse_ring_poly(rr_text, base);
        eucl::RingElem R = parse_ring_poly(RR_text, base);
        io.params["r"] = r.str();
        io.params["R"] = R.str();
        auto rep =
            polyvalues::weil_report(mod, h, H, f, r, F, R, degree_cap);
        io.result["independent"] = rep.independent;
        if (rep.witness) {
          ordered_json w;
          w["t"] = rep.witness->t.str();
          w["T"] = rep.witness->T.str();
          w["l"] = rep.witness->l.str();
          w["c"] = render_poly(rep.witness->c);
          w["C"] = render_poly(rep.witness->C);
          w["g"] = render_poly(rep.witness->g);
          w["k"] = rep.witness->k;
          w["note"] = rep.witness->note;
          io.result["witness"] = w;
        } else {
          io.result["witness"] = nullptr;
        }
        io.result["count"] = num_json(rep.count);
        io.result["normalizer"] = rat_str(rep.normalizer);
        io.result["error_term"] = rat_str(rep.error_term);
        io.result["error_term_vs_q"] = rat_str(rep.error_term_vs_q);
        io.result["bound_applicable"] = rep.bound_applicable;
        io.result["root_excess"] = rep.root_excess;
        io.result["q_fr"] = num_json(rep.q_fr);
        io.result["q_FR"] = num_json(rep.q_FR);
        io.result["bound_satisfied"] = rep.bound_satisfied;
        io.result["bound_value"] = rep.bound_value;
        io.result["corollary_predicts_positive"] =
            rep.corollary_predicts_positive;
        io.result["corollary_holds"] = rep.corollary_holds;
        if (rep.independent && rep.bound_applicable) {
          run_check(io.checks, "pair_count_error_bound", [&] {
            if (!rep.bound_satisfied)
              throw IdentityViolation("pair_count_error_bound", "violated");
            return "exact squared comparison holds";
          });
          run_check(io.checks, "pair_count_positivity", [&] {
            if (rep.corollary_predicts_positive && rep.count == 0)
              throw IdentityViolation("pair_count_positivity", "violated");
            return rep.corollary_predicts_positive
                       ? "positivity predicted and observed"
                       : "positivity not predicted for these parameters";
          });
        }
      } else {
        auto witness =
            polyvalues::dependent_witness_search(mod, h, H, f, F, degree_cap);
        io.result["found"] = witness.has_value();
        if (witness) {
          io.result["r"] = witness->r.str();
          io.result["R"] = witness->R.str();
          io.result["count"] = 0;
        } else {
          io.result["flag"] =
              "no zero-count scalars exist for this dependent pair";
        }
        run_check(io.checks, "dependent_pair_witness", [&] {
          if (!witness)
            throw IdentityViolation("dependent_pair_witness",
                                    "promised zero-count scalars absent");
          return "zero-count scalars located at r=" + witness->r.str() +
                 ", R=" + witness->R.str();
        });
      }
    } else if (command == "verify") {
      io.checks = run_verify(field, seed);
      size_t passed = 0;
      for (const auto& c : io.checks)
        if (c.pass) ++passed;
      io.result["checks_passed"] = passed;
      io.result["checks_failed"] = io.checks.size() - passed;
      io.params["seed"] = seed;
    }

    ordered_json rep;
    rep["schema_version"] = kSchemaVersion;
    rep["command"] = command;
    rep["field"] = field_json(field);
    rep["params"] = io.params;
    rep["result"] = io.result;
    rep["identity_checks"] = checks_json(io.checks);
    if (timing) {
      auto dt = std::chrono::duration_cast<std::chrono::milliseconds>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
      rep["wall_time_ms"] = static_cast<int64_t>(dt);
    }
    res.report = rep;
    res.payload = io.csv.empty() ? rep.dump(2) + "\n" : io.csv;
    res.exit_code = all_pass(io.checks) ? 0 : 3;
    res.out_path = out_path;
    return res;
  } catch (const CLI::CallForHelp& e) {
    res.payload = app.help();
    res.exit_code = 0;
    return res;
  } catch (const CLI::ParseError& e) {
    ordered_json rep;
    rep["schema_version"] = kSchemaVersion;
    rep["error"] = {{"type", "usage"}, {"message", e.what()}};
    res.report = rep;
    res.payload = rep.dump(2) + "\n";
    res.exit_code = 2;
    return res;
  } catch (const ParseError& e) {
    ordered_json rep;
    rep["schema_version"] = kSchemaVersion;
    rep["error"] = {{"type", "parse"},
                    {"message", e.what()},
                    {"offset", e.offset()}};
    res.report = rep;
    res.payload = rep.dump(2) + "\n";
    res.exit_code = 2;
    return res;
  } catch (const CapExceeded& e) {
    ordered_json rep;
    rep["schema_version"] = kSchemaVersion;
    rep["error"] = {{"type", "cap_exceeded"},
                    {"message", e.what()},
                    {"requested", e.requested()},
                    {"cap", e.cap()}};
    res.report = rep;
    res.payload = rep.dump(2) + "\n";
    res.exit_code = 4;
    return res;
  } catch (const IdentityViolation& e) {
    ordered_json rep;
    rep["schema_version"] = kSchemaVersion;
    rep["command"] = command;
    rep["error"] = {{"type", "identity_violation"},
                    {"check", e.check()},
                    {"detail", e.detail()}};
    ordered_json fail;
    fail["name"] = e.check();
    fail["status"] = "fail";
    fail["detail"] = e.detail();
    rep["identity_checks"] = ordered_json::array({fail});
    res.report = rep;
    res.payload = rep.dump(2) + "\n";
    res.exit_code = 3;
    return res;
  } catch (const std::domain_error& e) {
    ordered_json rep;
    rep["schema_version"] = kSchemaVersion;
    rep["error"] = {{"type", "usage"}, {"message", e.what()}};
    res.report = rep;
    res.payload = rep.dump(2) + "\n";
    res.exit_code = 2;
    return res;
  } catch (const std::invalid_argument& e) {
    ordered_json rep;
    rep["schema_version"] = kSchemaVersion;
    rep["error"] = {{"type", "usage"}, {"message", e.what()}};
    res.report = rep;
    res.payload = rep.dump(2) + "\n";
    res.exit_code = 2;
    return res;
  } catch (const std::exception& e) {
    ordered_json rep;
    rep["schema_version"] = kSchemaVersion;
    rep["error"] = {{"type", "internal"}, {"message", e.what()}};
    res.report = rep;
    res.payload = rep.dump(2) + "\n";
    res.exit_code = 1;
    return res;
  }
}

int run_main(int argc, char** argv) {
  std::vector<std::string> args;
  args.reserve(static_cast<size_t>(argc > 0 ? argc - 1 : 0));
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  ExecResult res = execute(args);
  if (!res.out_path.empty()) {
    std::ofstream out(res.out_path, std::ios::binary);
    if (!out) {
      std::cerr << "freefield: cannot open " << res.out_path << "\n";
      return 2;
    }
    out << res.payload;
  } else {
    std::cout << res.payload;
  }
  if (res.exit_code != 0) std::cerr << "freefield: exit " << res.exit_code
                                    << "\n";
  return res.exit_code;
}

}  // namespace freefield::cli
