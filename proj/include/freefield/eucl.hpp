#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "freefield/fqpoly.hpp"

namespace freefield::eucl {

/// An element of one of the two Euclidean domains this library works in:
/// the rational integers or a polynomial ring F_q[x].  Values are kept in
/// associate-normal form (positive integers, monic polynomials); arithmetic
/// that would mix the two domains, or polynomial rings over different
/// coefficient fields, raises a domain error.
class RingElem {
 public:
  RingElem() : v_(mpz_class(0)) {}

  static RingElem integer(mpz_class v);
  static RingElem integer(long v) { return integer(mpz_class(v)); }
  /// Normalizes to monic (scales by the inverse of the leading coefficient).
  static RingElem poly(FqPoly p);

  bool is_integer() const { return std::holds_alternative<mpz_class>(v_); }
  bool is_poly() const { return !is_integer(); }
  bool is_zero() const;
  /// After normalization the only unit representative is one.
  bool is_one() const;

  const mpz_class& int_value() const;
  const FqPoly& poly_value() const;

  /// Size of the quotient ring R/aR: |a| for integers, q^deg for
  /// polynomials.  Requires a != 0.
  mpz_class quotient_size() const;

  std::string str() const;

  friend bool operator==(const RingElem& a, const RingElem& b);
  friend bool operator!=(const RingElem& a, const RingElem& b) {
    return !(a == b);
  }
  /// Deterministic order within one ring: integers ascending; polynomials by
  /// degree, then coefficients from the constant term upward.
  static bool less(const RingElem& a, const RingElem& b);

 private:
  std::variant<mpz_class, FqPoly> v_;
};

struct RingElemLess {
  bool operator()(const RingElem& a, const RingElem& b) const {
    return RingElem::less(a, b);
  }
};

/// Prime factorization with normalized prime representatives, ascending in
/// the deterministic order, exponents >= 1.
struct Factorization {
  RingElem base;
  std::vector<std::pair<RingElem, uint32_t>> factors;
};

/// Both sides of the divisor-sum evaluation of
///   T(r, n) = sum_{d | r_(n)} |mu(d)| phi(d) / PhiBar(d)
/// (PhiBar = totient as a rational multiplier), together with the closed
/// form |R/alpha R| * W(|R/beta R|) where alpha = gcd(n, r) and
/// beta = gcd(r, r_(n)).  Construction verifies the two sides agree.
struct TIdentityResult {
  mpq_class sum_side;
  mpz_class closed_side;
  RingElem alpha;
  RingElem beta;
};

RingElem one_like(const RingElem& a);
RingElem mul(const RingElem& a, const RingElem& b);
/// Exact quotient; throws if b does not divide a.
RingElem div_exact(const RingElem& a, const RingElem& b);
bool divides(const RingElem& a, const RingElem& b);  // a | b
RingElem lcm(const RingElem& a, const RingElem& b);

/// Normalized gcd via the Euclidean algorithm; gcd(0, 0) = 0.
RingElem gcd_n(const RingElem& a, const RingElem& b);

/// Trial-division factorization (integers ascending, polynomials by the
/// deterministic order).  Requires a nonzero nonunit.
Factorization factorize(const RingElem& a);

/// All normalized divisors of a, sorted ascending; requires a != 0.
std::vector<RingElem> divisors(const RingElem& a);

/// Moebius function on normalized elements: 0 on non-squarefree, else
/// (-1)^(number of prime factors).
int mobius(const RingElem& a);

/// Unit-group size of R/aR (the totient); multiplicative over prime powers.
mpz_class euler_phi(const RingElem& a);

/// |R/aR|.
mpz_class quotient_size(const RingElem& a);

/// x_(y) = x / gcd(x, y), the y-reduced part of x.
RingElem reduce_by(const RingElem& x, const RingElem& y);

/// Number of squarefree normalized divisors, 2^(distinct primes).
mpz_class squarefree_count(const RingElem& a);
/// Same, for a plain positive integer (used when the count is taken of a
/// quotient size rather than of a ring element).
mpz_class squarefree_count_int(const mpz_class& n);

/// Exponent of the irreducible p in a; requires p irreducible and a != 0.
uint32_t valuation(const RingElem& p, const RingElem& a);

/// Evaluates the divisor sum T(r, n) and its closed form and verifies they
/// agree exactly (raises IdentityViolation otherwise).
TIdentityResult T_identity(const RingElem& r, const RingElem& n);

}  // namespace freefield::eucl
