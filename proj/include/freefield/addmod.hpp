#pragma once

#include <cstdint>

#include "freefield/eucl.hpp"
#include "freefield/fqpoly.hpp"
#include "freefield/gf.hpp"

namespace freefield::addmod {

/// The q-associate of f = sum a_i x^i in F_q[x]: the additive operator
/// L_f(y) = sum a_i y^(q^i).  Kept by its source polynomial; the
/// conventional (dense) form over F_{q^m} is materialized on demand.
struct LinearizedPoly {
  eucl::RingElem source;  // polynomial ring element over F_q
};

/// f must be a polynomial ring element over the base field of the tower it
/// will act on.
LinearizedPoly q_associate(const eucl::RingElem& f);

/// Dense conventional form of L_f as a polynomial over F_{q^m}.
FqPoly conventional_form(const LinearizedPoly& L,
                         const std::shared_ptr<const gf::FieldCtx>& ctx);

/// L_f(alpha), evaluated by iterating the q-power Frobenius.
gf::FFElem apply_linearized(const eucl::RingElem& f, const gf::FFElem& alpha);

/// F_q-order of alpha: the smallest monic divisor d of x^m - 1 with
/// L_d(alpha) = 0.  Ord(0) = 1.
eucl::RingElem fq_order(const gf::FFElem& alpha);

/// True when the Galois orbit {alpha, alpha^q, ..., alpha^(q^(m-1))} spans
/// F_{q^m} over F_q.  The rank computation is cross-checked against
/// fq_order(alpha) == x^m - 1; disagreement raises IdentityViolation.
bool normal_test(const gf::FFElem& alpha);

}  // namespace freefield::addmod
