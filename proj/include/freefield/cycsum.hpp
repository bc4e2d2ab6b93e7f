#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <vector>

namespace freefield::chars {

/// N-th cyclotomic polynomial, dense integer coefficients, constant first.
/// Computed as prod_{d | N} (x^d - 1)^{mu(N/d)} with the products and exact
/// divisions interleaved (each factor is a sparse binomial, so every step is
/// linear in the working degree).
std::vector<mpz_class> cyclotomic_poly(uint64_t N);

/// Reduction helper for one root order N: caches Phi_N and, for moderate N,
/// a dense table of x^j mod Phi_N rows so that reductions are table-driven.
/// Plans are cached process-wide and shared.
class CycPlan {
 public:
  static std::shared_ptr<const CycPlan> get(uint64_t N);

  uint64_t modulus_order() const { return N_; }
  size_t phi_degree() const { return phi_deg_; }
  const std::vector<mpz_class>& phi() const { return phi_; }
  bool has_table() const { return !rows_.empty(); }

  /// Canonical coordinates of sum counts[j] * x^j modulo Phi_N.  `counts`
  /// may have any length; exponents are taken mod N first.
  std::vector<mpz_class> reduce(const std::vector<mpz_class>& counts) const;
  /// Same with machine integers; falls back to the exact big-int route if
  /// the table is unavailable, and checks for overflow when it is not.
  std::vector<int64_t> reduce_i64(const std::vector<int64_t>& counts) const;

 private:
  explicit CycPlan(uint64_t N);

  uint64_t N_;
  size_t phi_deg_;
  std::vector<mpz_class> phi_;
  std::vector<int64_t> rows_;  // N rows of phi_deg_ entries; empty if untabled
};

/// An exact element of Z[zeta_N] kept as weights on the N-th roots of unity:
/// sum_j counts[j] * zeta_N^j.  Equality and rationality tests reduce the
/// weight vector modulo the cyclotomic polynomial of the smallest cyclotomic
/// field containing the support, so every answer is exact.
class CycSum {
 public:
  explicit CycSum(uint64_t N);
  static CycSum root(uint64_t N, uint64_t exponent);
  static CycSum constant(uint64_t N, mpz_class c);

  uint64_t root_order() const { return N_; }
  const std::vector<mpz_class>& counts() const { return counts_; }

  void add_root(uint64_t exponent, const mpz_class& weight = 1);
  CycSum& operator+=(const CycSum& o);
  CycSum& operator-=(const CycSum& o);
  friend CycSum operator+(CycSum a, const CycSum& b) { return a += b; }
  friend CycSum operator-(CycSum a, const CycSum& b) { return a -= b; }
  /// Ring product (cyclic convolution of the weight vectors).
  friend CycSum operator*(const CycSum& a, const CycSum& b);
  CycSum times_root(uint64_t exponent) const;
  void scale(const mpz_class& c);

  /// Canonical coordinates mod Phi_N (no support compression), mostly for
  /// inspection and tests.
  std::vector<mpz_class> reduced() const;

  bool eq(const CycSum& o) const;
  bool eq_rational(const mpq_class& c) const;
  /// If the value is a rational integer, yields it.
  bool as_integer(mpz_class& out) const;

  /// Numeric magnitude via double-precision evaluation (for tolerance-based
  /// companions only; all decisions in the library use the exact routes).
  double abs_value() const;

 private:
  bool is_zero_after_reduction() const;

  uint64_t N_;
  std::vector<mpz_class> counts_;
};

bool cyc_eq_rational(const CycSum& s, const mpq_class& c);

}  // namespace freefield::chars
