#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "freefield/fqctx.hpp"

namespace freefield {

/// Dense polynomial over an FqCtx.  Coefficients are field-element indices,
/// constant term first, with no trailing zeros; the zero polynomial has an
/// empty coefficient vector.
struct FqPoly {
  std::shared_ptr<const FqCtx> field;
  std::vector<uint64_t> coeffs;
};

int fq_deg(const FqPoly& a);  // -1 for the zero polynomial
bool fq_is_zero(const FqPoly& a);
bool fq_is_one(const FqPoly& a);
bool fq_is_monic(const FqPoly& a);
uint64_t fq_lead(const FqPoly& a);  // a != 0
uint64_t fq_coeff(const FqPoly& a, size_t k);

FqPoly fq_zero(std::shared_ptr<const FqCtx> f);
FqPoly fq_const(std::shared_ptr<const FqCtx> f, uint64_t c);
FqPoly fq_x(std::shared_ptr<const FqCtx> f);
FqPoly fq_monomial(std::shared_ptr<const FqCtx> f, size_t k, uint64_t c = 1);
/// Strips trailing zeros in place and returns the argument.
FqPoly& fq_normalize(FqPoly& a);
FqPoly fq_from_coeffs(std::shared_ptr<const FqCtx> f,
                      std::vector<uint64_t> coeffs);

bool fq_equal(const FqPoly& a, const FqPoly& b);
/// Deterministic order: by degree, then coefficients compared from the
/// constant term upward.  This matches ascending-index enumeration of
/// coefficient vectors.
bool fq_less(const FqPoly& a, const FqPoly& b);

FqPoly fq_add(const FqPoly& a, const FqPoly& b);
FqPoly fq_sub(const FqPoly& a, const FqPoly& b);
FqPoly fq_neg(const FqPoly& a);
FqPoly fq_mul(const FqPoly& a, const FqPoly& b);
FqPoly fq_scale(const FqPoly& a, uint64_t c);
/// Division with remainder; b != 0.
std::pair<FqPoly, FqPoly> fq_divmod(const FqPoly& a, const FqPoly& b);
/// Exact division; throws if the remainder is nonzero.
FqPoly fq_div_exact(const FqPoly& a, const FqPoly& b);
/// Monic gcd (zero if both inputs are zero).
FqPoly fq_gcd(const FqPoly& a, const FqPoly& b);
FqPoly fq_make_monic(const FqPoly& a);
FqPoly fq_pow(const FqPoly& a, uint64_t e);
FqPoly fq_derivative(const FqPoly& a);
uint64_t fq_eval(const FqPoly& a, uint64_t x);

/// Exhaustive trial division by lower-degree monic polynomials.  Intended
/// for the modest degrees this library works at.
bool fq_is_irreducible(const FqPoly& a);

/// Canonical rendering: descending powers joined by '+', coefficients over a
/// prime base printed as integers, over an extension base as a bracketed
/// digit list `[c0,c1,...]`.  The zero polynomial renders as "0".
std::string fq_to_string(const FqPoly& a, const std::string& var = "x");

}  // namespace freefield
