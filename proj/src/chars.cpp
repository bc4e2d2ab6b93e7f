#include "freefield/chars.hpp"

#include <stdexcept>

namespace freefield::chars {

Character make_character(std::shared_ptr<const modfree::ModuleCtx> ctx,
                         uint64_t index) {
  if (!ctx) throw std::domain_error("character needs a module context");
  if (index >= ctx->num_characters())
    throw std::domain_error("character index out of range");
  return {std::move(ctx), index};
}

Character trivial_character(std::shared_ptr<const modfree::ModuleCtx> ctx) {
  return make_character(std::move(ctx), 0);
}

CycSum char_eval(const Character& chi, uint64_t elem) {
  const auto& ctx = *chi.ctx;
  const uint64_t N = ctx.cyc_modulus();
  const uint64_t root_order = ctx.char_root_order();
  const uint64_t e = ctx.char_value_exp(chi.index, elem);
  // Scale the zeta_{root_order} exponent onto the common zeta_N scale.
  return CycSum::root(N, e * (N / root_order));
}

eucl::RingElem char_order(const Character& chi) {
  return chi.ctx->char_order(chi.index);
}

std::vector<Character> chars_of_order(
    const std::shared_ptr<const modfree::ModuleCtx>& ctx,
    const eucl::RingElem& t) {
  std::vector<Character> out;
  for (uint64_t j : ctx->chars_with_order(t)) out.push_back({ctx, j});
  return out;
}

}  // namespace freefield::chars
