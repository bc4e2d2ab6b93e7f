#include "freefield/addmod.hpp"

#include <stdexcept>

#include "freefield/errors.hpp"

namespace freefield::addmod {

namespace {

void require_base_poly(const eucl::RingElem& f,
                       const std::shared_ptr<const gf::FieldCtx>& ctx) {
  if (!f.is_poly())
    throw std::domain_error("linearized operator needs a polynomial source");
  if (!f.poly_value().field->same_field(*ctx->base_field()))
    throw std::domain_error(
        "linearized operator source must live over the base field F_q");
}

}  // namespace

LinearizedPoly q_associate(const eucl::RingElem& f) {
  if (!f.is_poly())
    throw std::domain_error("q-associate of a non-polynomial");
  return {f};
}

FqPoly conventional_form(const LinearizedPoly& L,
                         const std::shared_ptr<const gf::FieldCtx>& ctx) {
  require_base_poly(L.source, ctx);
  const FqPoly& src = L.source.poly_value();
  FqPoly out = fq_zero(ctx->ext_field());
  for (size_t i = 0; i < src.coeffs.size(); ++i) {
    if (src.coeffs[i] == 0) continue;
    uint64_t qi = 1;
    for (size_t k = 0; k < i; ++k) qi *= ctx->q();  // exponent q^i
    // a_i (an F_q scalar) embeds as the ext element with constant digit a_i.
    out = fq_add(out, fq_monomial(ctx->ext_field(), qi, src.coeffs[i]));
  }
  return out;
}

gf::FFElem apply_linearized(const eucl::RingElem& f, const gf::FFElem& alpha) {
  require_base_poly(f, alpha.ctx);
  const FqPoly& src = f.poly_value();
  const auto& ext = *alpha.ctx->ext_field();
  uint64_t acc = 0;
  uint64_t frob = alpha.idx;  // alpha^(q^i), advanced per term
  for (size_t i = 0; i < src.coeffs.size(); ++i) {
    if (src.coeffs[i] != 0)
      acc = ext.add(acc, ext.scale(src.coeffs[i], frob));
    if (i + 1 < src.coeffs.size()) frob = alpha.ctx->frobenius_q_idx(frob);
  }
  return {alpha.ctx, acc};
}

eucl::RingElem fq_order(const gf::FFElem& alpha) {
  for (const auto& d : alpha.ctx->splitting_modulus_divisors()) {
    if (apply_linearized(d, alpha).is_zero()) return d;
  }
  throw IdentityViolation("fq_order",
                          "x^m - 1 failed to annihilate a field element");
}

bool normal_test(const gf::FFElem& alpha) {
  const auto& ctx = alpha.ctx;
  const uint32_t m = ctx->ext_degree();
  // Row-reduce the m x m matrix of Galois-orbit coordinates over F_q.
  const auto& base = *ctx->base_field();
  std::vector<std::vector<uint64_t>> rows;
  uint64_t cur = alpha.idx;
  for (uint32_t i = 0; i < m; ++i) {
    rows.push_back(ctx->ext_field()->unpack(cur));
    cur = ctx->frobenius_q_idx(cur);
  }
  uint32_t rank = 0;
  for (uint32_t col = 0; col < m && rank < m; ++col) {
    uint32_t pivot = rank;
    while (pivot < m && rows[pivot][col] == 0) ++pivot;
    if (pivot == m) continue;
    std::swap(rows[rank], rows[pivot]);
    uint64_t inv = base.inv(rows[rank][col]);
    for (uint32_t j = col; j < m; ++j)
      rows[rank][j] = base.mul(rows[rank][j], inv);
    for (uint32_t r = 0; r < m; ++r) {
      if (r == rank || rows[r][col] == 0) continue;
      uint64_t f = rows[r][col];
      for (uint32_t j = col; j < m; ++j)
        rows[r][j] = base.sub(rows[r][j], base.mul(f, rows[rank][j]));
    }
    ++rank;
  }
  bool full_rank = (rank == m);

  // Independent route: alpha is normal iff its F_q-order is all of x^m - 1.
  bool by_order = (fq_order(alpha) == ctx->splitting_modulus());
  if (full_rank != by_order)
    throw IdentityViolation(
        "normal_rank_vs_order",
        "orbit rank " + std::to_string(rank) + " of element index " +
            std::to_string(alpha.idx) +
            " disagrees with the F_q-order route");
  return full_rank;
}

}  // namespace freefield::addmod
