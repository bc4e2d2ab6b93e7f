#include "freefield/eucl.hpp"

#include <algorithm>
#include <stdexcept>

#include "freefield/errors.hpp"

namespace freefield::eucl {

namespace {

void require_same_ring(const RingElem& a, const RingElem& b) {
  if (a.is_integer() != b.is_integer())
    throw std::domain_error("operands live in different rings");
  if (a.is_poly() &&
      !a.poly_value().field->same_field(*b.poly_value().field))
    throw std::domain_error(
        "polynomial operands live over different coefficient fields");
}

mpz_class mpz_pow(const mpz_class& base, unsigned long e) {
  mpz_class out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), e);
  return out;
}

}  // namespace

RingElem RingElem::integer(mpz_class v) {
  RingElem e;
  e.v_ = abs(v);
  return e;
}

RingElem RingElem::poly(FqPoly p) {
  fq_normalize(p);
  if (!fq_is_zero(p) && !fq_is_monic(p)) p = fq_make_monic(p);
  RingElem e;
  e.v_ = std::move(p);
  return e;
}

bool RingElem::is_zero() const {
  return is_integer() ? int_value() == 0 : fq_is_zero(poly_value());
}

bool RingElem::is_one() const {
  return is_integer() ? int_value() == 1 : fq_is_one(poly_value());
}

const mpz_class& RingElem::int_value() const {
  if (!is_integer()) throw std::domain_error("not an integer ring element");
  return std::get<mpz_class>(v_);
}

const FqPoly& RingElem::poly_value() const {
  if (!is_poly()) throw std::domain_error("not a polynomial ring element");
  return std::get<FqPoly>(v_);
}

mpz_class RingElem::quotient_size() const {
  if (is_zero()) throw std::domain_error("quotient by zero is infinite");
  if (is_integer()) return int_value();
  return mpz_pow(mpz_class(static_cast<unsigned long>(poly_value().field->q())),
                 static_cast<unsigned long>(fq_deg(poly_value())));
}

std::string RingElem::str() const {
  return is_integer() ? int_value().get_str() : fq_to_string(poly_value());
}

bool operator==(const RingElem& a, const RingElem& b) {
  if (a.is_integer() != b.is_integer()) return false;
  if (a.is_integer()) return a.int_value() == b.int_value();
  return fq_equal(a.poly_value(), b.poly_value());
}

bool RingElem::less(const RingElem& a, const RingElem& b) {
  require_same_ring(a, b);
  if (a.is_integer()) return a.int_value() < b.int_value();
  return fq_less(a.poly_value(), b.poly_value());
}

RingElem one_like(const RingElem& a) {
  if (a.is_integer()) return RingElem::integer(1);
  return RingElem::poly(fq_const(a.poly_value().field, 1));
}

RingElem mul(const RingElem& a, const RingElem& b) {
  require_same_ring(a, b);
  if (a.is_integer()) return RingElem::integer(a.int_value() * b.int_value());
  return RingElem::poly(fq_mul(a.poly_value(), b.poly_value()));
}

bool divides(const RingElem& a, const RingElem& b) {
  require_same_ring(a, b);
  if (b.is_zero()) return true;
  if (a.is_zero()) return false;
  if (a.is_integer())
    return mpz_divisible_p(b.int_value().get_mpz_t(),
                           a.int_value().get_mpz_t()) != 0;
  return fq_is_zero(fq_divmod(b.poly_value(), a.poly_value()).second);
}

RingElem div_exact(const RingElem& a, const RingElem& b) {
  require_same_ring(a, b);
  if (b.is_zero()) throw std::domain_error("division by zero");
  if (a.is_integer()) {
    if (!mpz_divisible_p(a.int_value().get_mpz_t(), b.int_value().get_mpz_t()))
      throw std::domain_error("exact division left a remainder");
    return RingElem::integer(a.int_value() / b.int_value());
  }
  return RingElem::poly(fq_div_exact(a.poly_value(), b.poly_value()));
}

RingElem gcd_n(const RingElem& a, const RingElem& b) {
  require_same_ring(a, b);
  if (a.is_integer()) {
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), a.int_value().get_mpz_t(),
            b.int_value().get_mpz_t());
    return RingElem::integer(g);
  }
  return RingElem::poly(fq_gcd(a.poly_value(), b.poly_value()));
}

RingElem lcm(const RingElem& a, const RingElem& b) {
  if (a.is_zero() || b.is_zero()) {
    require_same_ring(a, b);
    return a.is_integer() ? RingElem::integer(0)
                          : RingElem::poly(fq_zero(a.poly_value().field));
  }
  return div_exact(mul(a, b), gcd_n(a, b));
}

namespace {

Factorization factorize_integer(const RingElem& a) {
  Factorization out{a, {}};
  mpz_class n = a.int_value();
  auto push = [&](const mpz_class& p, uint32_t e) {
    out.factors.emplace_back(RingElem::integer(p), e);
  };
  mpz_class f = 2;
  while (f * f <= n) {
    if (mpz_divisible_p(n.get_mpz_t(), f.get_mpz_t())) {
      uint32_t e = 0;
      while (mpz_divisible_p(n.get_mpz_t(), f.get_mpz_t())) {
        n /= f;
        ++e;
      }
      push(f, e);
    }
    f += (f == 2) ? 1 : 2;
  }
  if (n > 1) push(n, 1);
  return out;
}

Factorization factorize_poly(const RingElem& a) {
  Factorization out{a, {}};
  FqPoly work = a.poly_value();
  const auto field = work.field;
  const uint64_t q = field->q();
  // Trial division by monic candidates, smallest first in the deterministic
  // order, so every divisor found is irreducible.
  for (int dd = 1; 2 * dd <= fq_deg(work); ++dd) {
    std::vector<uint64_t> c(dd + 1, 0);
    c[dd] = 1;
    while (true) {
      FqPoly cand{field, c};
      if (fq_is_zero(fq_divmod(work, cand).second)) {
        uint32_t e = 0;
        while (fq_is_zero(fq_divmod(work, cand).second)) {
          work = fq_div_exact(work, cand);
          ++e;
        }
        out.factors.emplace_back(RingElem::poly(cand), e);
        if (2 * dd > fq_deg(work)) break;
      }
      // Advance in fq_less order (ascending packed index): the constant
      // digit spins fastest.
      int i = 0;
      while (i < dd && ++c[static_cast<size_t>(i)] == q)
        c[static_cast<size_t>(i++)] = 0;
      if (i == dd) break;
      if (2 * dd > fq_deg(work)) break;
    }
  }
  if (fq_deg(work) >= 1)
    out.factors.emplace_back(RingElem::poly(work), 1);
  return out;
}

}  // namespace

Factorization factorize(const RingElem& a) {
  if (a.is_zero()) throw std::domain_error("cannot factor zero");
  if (a.is_one()) return {a, {}};
  return a.is_integer() ? factorize_integer(a) : factorize_poly(a);
}

std::vector<RingElem> divisors(const RingElem& a) {
  Factorization f = factorize(a);
  std::vector<RingElem> out{one_like(a)};
  for (const auto& [p, e] : f.factors) {
    size_t n = out.size();
    RingElem pk = p;
    for (uint32_t k = 1; k <= e; ++k) {
      for (size_t i = 0; i < n; ++i) out.push_back(mul(out[i], pk));
      if (k < e) pk = mul(pk, p);
    }
  }
  std::sort(out.begin(), out.end(), RingElem::less);
  return out;
}

int mobius(const RingElem& a) {
  Factorization f = factorize(a);
  for (const auto& [p, e] : f.factors)
    if (e > 1) return 0;
  int m = (f.factors.size() % 2 == 0) ? 1 : -1;
#ifdef FREEFIELD_FAULT_MU_SIGN
  // Deliberate defect used by the negative-control build: squarefree
  // nonunits get the wrong sign.
  if (!f.factors.empty()) m = -m;
#endif
  return m;
}

mpz_class euler_phi(const RingElem& a) {
  Factorization f = factorize(a);
  mpz_class out = 1;
  for (const auto& [p, e] : f.factors) {
    mpz_class ps = quotient_size(p);
    out *= mpz_pow(ps, e - 1) * (ps - 1);
  }
  return out;
}

mpz_class quotient_size(const RingElem& a) { return a.quotient_size(); }

RingElem reduce_by(const RingElem& x, const RingElem& y) {
  return div_exact(x, gcd_n(x, y));
}

mpz_class squarefree_count(const RingElem& a) {
  Factorization f = factorize(a);
  mpz_class out = 1;
  mpz_mul_2exp(out.get_mpz_t(), out.get_mpz_t(), f.factors.size());
  return out;
}

mpz_class squarefree_count_int(const mpz_class& n) {
  if (n <= 0) throw std::domain_error("squarefree count needs a positive size");
  return squarefree_count(RingElem::integer(n));
}

uint32_t valuation(const RingElem& p, const RingElem& a) {
  if (a.is_zero()) throw std::domain_error("valuation of zero");
  Factorization pf = factorize(p);
  if (pf.factors.size() != 1 || pf.factors[0].second != 1 ||
      !(pf.factors[0].first == p))
    throw std::domain_error("valuation base is not irreducible");
  uint32_t v = 0;
  RingElem work = a;
  while (divides(p, work)) {
    work = div_exact(work, p);
    ++v;
  }
  return v;
}

TIdentityResult T_identity(const RingElem& r, const RingElem& n) {
  require_same_ring(r, n);
  if (r.is_zero()) throw std::domain_error("T identity needs r != 0");

  mpq_class sum = 0;
  for (const RingElem& d : divisors(r)) {
    RingElem dn = reduce_by(d, n);
    int mu = mobius(dn);
    if (mu == 0) continue;
    // |mu(d_(n))| * phi(d) / phi(d_(n))
    mpq_class term(euler_phi(d), euler_phi(dn));
    term.canonicalize();
    sum += term;
  }

  RingElem alpha = gcd_n(n, r);
  RingElem beta = gcd_n(r, reduce_by(r, n));
  mpz_class closed = quotient_size(alpha) * squarefree_count(beta);

  if (sum != mpq_class(closed))
    throw IdentityViolation(
        "divisor_sum_closed_form",
        "T(" + r.str() + ", " + n.str() + "): divisor sum " + sum.get_str() +
            " != closed form " + closed.get_str());
  return {sum, closed, alpha, beta};
}

}  // namespace freefield::eucl
