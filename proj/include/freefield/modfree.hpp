#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "freefield/chars.hpp"
#include "freefield/modctx.hpp"

namespace freefield::modfree {

/// Parameters of an (r, n)-freeness question.  Both r and n must be
/// normalized divisors of the module exponent; validated at construction.
struct FreenessQuery {
  eucl::RingElem r;
  eucl::RingElem n;
};

FreenessQuery make_query(const std::shared_ptr<const ModuleCtx>& ctx,
                         const eucl::RingElem& r, const eucl::RingElem& n);

struct FreenessReport {
  FreenessQuery query;
  uint64_t count = 0;
  /// Field-element indices of the free elements, ascending; filled on
  /// request only.
  std::optional<std::vector<uint64_t>> elements;
  /// Always true on return: the definitional and gcd routes were compared
  /// element by element (disagreement raises IdentityViolation instead).
  bool cross_checked = false;
};

/// Definitional route: elem is (r, n)-free iff its order divides
/// exponent / gcd(r, n) and it is not in the image of d * (that submodule)
/// for any divisor d != 1 of r_(n).  Computed by exhaustively marking the
/// excluded images; memoized per query.
bool is_free_def(const std::shared_ptr<const ModuleCtx>& ctx, uint64_t elem,
                 const FreenessQuery& q);

/// Arithmetic route: ord(elem) | exponent / gcd(r, n)  and
/// gcd(r, exponent / ord(elem)) = gcd(r, n).
bool is_free_gcd(const std::shared_ptr<const ModuleCtx>& ctx, uint64_t elem,
                 const FreenessQuery& q);

/// The whole definitional free/not-free mask, indexed by field element
/// index (elements outside the carrier read false).
const std::vector<char>& def_free_mask(
    const std::shared_ptr<const ModuleCtx>& ctx, const FreenessQuery& q);

/// Character-sum characteristic function of the multiplicative order being
/// exactly M: (M / (q^m - 1)) sum_{d | M} (mu(d)/d) sum_{ord kappa | d(q^m-1)/M}
/// kappa(alpha).  Exact rational; must come out 0 or 1 and agree with the
/// direct order computation, otherwise IdentityViolation.
mpq_class carlitz_psi(const std::shared_ptr<const ModuleCtx>& ctx,
                      uint64_t elem, uint64_t M);

/// Character-sum characteristic function of element order equal to
/// exponent / n.  Exact rational, self-checked as above.
mpq_class order_indicator(const std::shared_ptr<const ModuleCtx>& ctx,
                          uint64_t elem, const eucl::RingElem& n);

/// Variant evaluator that keeps the order-n Moebius weight constant across
/// the divisor sum (a published form of the same expression).  Exposed for
/// diagnostics; carries no 0/1 contract and is not used by anything else.
mpq_class order_indicator_literal(const std::shared_ptr<const ModuleCtx>& ctx,
                                  uint64_t elem, const eucl::RingElem& n);

/// Character-sum characteristic function of (r, n)-freeness:
/// (phi(r_(n)) / |R/rR|) sum_{t | r} (mu(t_(n))/phi(t_(n)))
/// sum_{ord chi = t} chi(elem).  Exact rational; must come out 0 or 1 and
/// agree with is_free_gcd, otherwise IdentityViolation.
mpq_class char_fn_free(const std::shared_ptr<const ModuleCtx>& ctx,
                       uint64_t elem, const FreenessQuery& q);

/// The image set {r * beta : ord(beta) = b} and the set
/// {gamma : ord(gamma) = b_(n)} with n = gcd(r, exponent); the two must be
/// equal with cardinality phi(b_(n)).  Returns (image, order_set), both
/// sorted ascending.
std::pair<std::vector<uint64_t>, std::vector<uint64_t>> image_order_set(
    const std::shared_ptr<const ModuleCtx>& ctx, const eucl::RingElem& r,
    const eucl::RingElem& b);

/// (exponent/n .. ) primitivity: elem generates the unique submodule of
/// index-divisor n, i.e. ord(elem) = exponent / n.
bool n_primitive_test(const std::shared_ptr<const ModuleCtx>& ctx,
                      uint64_t elem, const eucl::RingElem& n);

/// Enumerates the free elements for a query, running both routes on every
/// carrier element and verifying they agree.
FreenessReport enumerate_free(const std::shared_ptr<const ModuleCtx>& ctx,
                              const FreenessQuery& q, bool with_elements);

}  // namespace freefield::modfree
