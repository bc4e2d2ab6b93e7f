#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "freefield/cycsum.hpp"
#include "freefield/eucl.hpp"
#include "freefield/modctx.hpp"

namespace freefield::chars {

/// A character of a module: a homomorphism into the roots of unity.  For the
/// multiplicative module the index is the dual exponent j (chi_j(g^k) =
/// zeta_{q^m-1}^{jk}); for the additive module it is the twist element beta
/// (psi_beta(x) = zeta_p^{Tr(beta x)}).
struct Character {
  std::shared_ptr<const modfree::ModuleCtx> ctx;
  uint64_t index = 0;

  modfree::ModuleCtx::Kind kind() const { return ctx->kind(); }
  bool is_trivial() const { return index == 0; }
};

Character trivial_character(std::shared_ptr<const modfree::ModuleCtx> ctx);
Character make_character(std::shared_ptr<const modfree::ModuleCtx> ctx,
                         uint64_t index);

/// chi(elem) as an exact root of unity in Z[zeta_N], N the context's
/// cyclotomic modulus lcm(q^m - 1, p).
CycSum char_eval(const Character& chi, uint64_t elem);

/// Order of chi in the dual module (a normalized divisor of the exponent).
eucl::RingElem char_order(const Character& chi);

/// All characters of exact order t; count always equals the totient of t.
std::vector<Character> chars_of_order(
    const std::shared_ptr<const modfree::ModuleCtx>& ctx,
    const eucl::RingElem& t);

}  // namespace freefield::chars
