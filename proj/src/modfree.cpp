#include "freefield/modfree.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "freefield/errors.hpp"

namespace freefield::modfree {

namespace {

void require_divisor(const std::shared_ptr<const ModuleCtx>& ctx,
                     const eucl::RingElem& d, const char* what) {
  if (d.is_zero() || !eucl::divides(d, ctx->exponent()))
    throw std::domain_error(std::string(what) +
                            " must be a nonzero divisor of the module exponent");
}

std::string binary_failure_detail(const char* fn, const mpq_class& value,
                                  uint64_t elem, const std::string& params) {
  std::ostringstream os;
  os << fn << "(" << params << ") at element index " << elem
     << " evaluated to " << value.get_str() << ", expected 0 or 1";
  return os.str();
}

}  // namespace

FreenessQuery make_query(const std::shared_ptr<const ModuleCtx>& ctx,
                         const eucl::RingElem& r, const eucl::RingElem& n) {
  require_divisor(ctx, r, "freeness parameter r");
  require_divisor(ctx, n, "freeness parameter n");
  return {r, n};
}

bool is_free_gcd(const std::shared_ptr<const ModuleCtx>& ctx, uint64_t elem,
                 const FreenessQuery& q) {
  const eucl::RingElem& ord = ctx->element_order(elem);
  eucl::RingElem g = eucl::gcd_n(q.r, q.n);
  eucl::RingElem K = eucl::div_exact(ctx->exponent(), g);
  if (!eucl::divides(ord, K)) return false;
  return eucl::gcd_n(q.r, eucl::div_exact(ctx->exponent(), ord)) == g;
}

const std::vector<char>& def_free_mask(
    const std::shared_ptr<const ModuleCtx>& ctx, const FreenessQuery& q) {
  return ctx->free_mask_for(q.r, q.n, [&]() {
    const uint64_t total = ctx->field()->order();
    eucl::RingElem K =
        eucl::div_exact(ctx->exponent(), eucl::gcd_n(q.r, q.n));
    std::vector<char> in_sub(total, 0), excluded(total, 0);
    for (uint64_t elem : ctx->carrier())
      in_sub[elem] = eucl::divides(ctx->element_order(elem), K) ? 1 : 0;
    // Everything hit by d * beta for a nonunit divisor d of r_(n) and beta
    // in the submodule is not free, by definition.
    for (const auto& d : eucl::divisors(eucl::reduce_by(q.r, q.n))) {
      if (d.is_one()) continue;
      for (uint64_t beta : ctx->carrier())
        if (in_sub[beta]) excluded[ctx->act(d, beta)] = 1;
    }
    std::vector<char> mask(total, 0);
    for (uint64_t elem : ctx->carrier())
      mask[elem] = (in_sub[elem] && !excluded[elem]) ? 1 : 0;
    return mask;
  });
}

bool is_free_def(const std::shared_ptr<const ModuleCtx>& ctx, uint64_t elem,
                 const FreenessQuery& q) {
  if (!ctx->contains(elem))
    throw std::domain_error("element is not in the module carrier");
  return def_free_mask(ctx, q)[elem] != 0;
}

mpq_class carlitz_psi(const std::shared_ptr<const ModuleCtx>& ctx,
                      uint64_t elem, uint64_t M) {
  if (ctx->kind() != ModuleCtx::Kind::Multiplicative)
    throw std::domain_error(
        "the order characteristic function by dual exponent is a "
        "multiplicative-module operation");
  const uint64_t Q = ctx->field()->group_order();
  eucl::RingElem Me = eucl::RingElem::integer(
      mpz_class(static_cast<unsigned long>(M)));
  if (M == 0 || Q % M != 0)
    throw std::domain_error("order parameter must divide q^m - 1");
  if (!ctx->contains(elem))
    throw std::domain_error("element is not in the module carrier");

  // (M / (q^m-1)) sum_{d | M} (mu(d)/d) sum_{ord(kappa) | d (q^m-1)/M} kappa
  mpq_class acc = 0;
  for (const auto& d : eucl::divisors(Me)) {
    int mu = eucl::mobius(d);
    if (mu == 0) continue;
    const mpz_class& d_int = d.int_value();
    uint64_t bound = mpz_get_ui(d_int.get_mpz_t()) * (Q / M);
    mpz_class inner = 0;
    for (const auto& t : eucl::divisors(eucl::RingElem::integer(
             mpz_class(static_cast<unsigned long>(bound == 0 ? 1 : bound)))))
      inner += ctx->order_char_sum(t, elem);
    acc += mpq_class(mu * inner, d_int);
  }
  acc *= mpq_class(mpz_class(static_cast<unsigned long>(M)),
                   mpz_class(static_cast<unsigned long>(Q)));
  acc.canonicalize();

  bool is_target = ctx->field()->mult_order_idx(elem) == M;
  if (acc != mpq_class(is_target ? 1 : 0))
    throw IdentityViolation(
        "order_charfn_binary",
        binary_failure_detail("order charfn", acc, elem,
                              "M=" + std::to_string(M)) +
            "; direct order route says " + (is_target ? "1" : "0"));
  return acc;
}

namespace {

mpq_class mobius_totient_sum(const std::shared_ptr<const ModuleCtx>& ctx,
                             uint64_t elem, const eucl::RingElem& top,
                             const eucl::RingElem& n) {
  // sum_{t | top} mu(t_(n)) / phi(t_(n)) * S_t(elem)
  mpq_class acc = 0;
  for (const auto& t : eucl::divisors(top)) {
    eucl::RingElem tn = eucl::reduce_by(t, n);
    int mu = eucl::mobius(tn);
    if (mu == 0) continue;
    mpq_class coeff(mu, eucl::euler_phi(tn));
    acc += coeff * mpz_class(ctx->order_char_sum(t, elem));
  }
  acc.canonicalize();
  return acc;
}

}  // namespace

mpq_class order_indicator(const std::shared_ptr<const ModuleCtx>& ctx,
                          uint64_t elem, const eucl::RingElem& n) {
  require_divisor(ctx, n, "order parameter n");
  if (!ctx->contains(elem))
    throw std::domain_error("element is not in the module carrier");
  eucl::RingElem target = eucl::div_exact(ctx->exponent(), n);

  mpq_class acc =
      mobius_totient_sum(ctx, elem, ctx->exponent(), n) *
      mpq_class(eucl::euler_phi(target), ctx->size());
  acc.canonicalize();

  bool is_target = ctx->element_order(elem) == target;
  if (acc != mpq_class(is_target ? 1 : 0))
    throw IdentityViolation(
        "order_indicator_binary",
        binary_failure_detail("order indicator", acc, elem, "n=" + n.str()) +
            "; direct order route says " + (is_target ? "1" : "0"));
  return acc;
}

mpq_class order_indicator_literal(const std::shared_ptr<const ModuleCtx>& ctx,
                                  uint64_t elem, const eucl::RingElem& n) {
  require_divisor(ctx, n, "order parameter n");
  if (!ctx->contains(elem))
    throw std::domain_error("element is not in the module carrier");
  // Published variant with the Moebius weight held at mu(n) across the
  // divisor sum; diagnostic only, no binary contract.
  int mu_n = eucl::mobius(n);
  mpq_class acc = 0;
  for (const auto& d : eucl::divisors(n)) {
    mpq_class coeff(mu_n, eucl::quotient_size(d));
    acc += coeff * mpz_class(ctx->order_char_sum(d, elem));
  }
  acc *= mpq_class(eucl::quotient_size(n), ctx->size());
  acc.canonicalize();
  return acc;
}

mpq_class char_fn_free(const std::shared_ptr<const ModuleCtx>& ctx,
                       uint64_t elem, const FreenessQuery& q) {
  if (!ctx->contains(elem))
    throw std::domain_error("element is not in the module carrier");
  eucl::RingElem rn = eucl::reduce_by(q.r, q.n);

  mpq_class acc = mobius_totient_sum(ctx, elem, q.r, q.n) *
                  mpq_class(eucl::euler_phi(rn), eucl::quotient_size(q.r));
  acc.canonicalize();

  bool by_gcd = is_free_gcd(ctx, elem, q);
  if (acc != mpq_class(by_gcd ? 1 : 0))
    throw IdentityViolation(
        "freeness_charfn_binary",
        binary_failure_detail("freeness charfn", acc, elem,
                              "r=" + q.r.str() + ", n=" + q.n.str()) +
            "; gcd route says " + (by_gcd ? "1" : "0"));
  return acc;
}

std::pair<std::vector<uint64_t>, std::vector<uint64_t>> image_order_set(
    const std::shared_ptr<const ModuleCtx>& ctx, const eucl::RingElem& r,
    const eucl::RingElem& b) {
  require_divisor(ctx, b, "order parameter b");
  if (r.is_zero())
    throw std::domain_error("scalar r must be nonzero");
  eucl::RingElem n = eucl::gcd_n(r, ctx->exponent());
  eucl::RingElem target = eucl::reduce_by(b, n);

  std::vector<uint64_t> image, order_set;
  for (uint64_t beta : ctx->carrier()) {
    if (ctx->element_order(beta) == b) image.push_back(ctx->act(r, beta));
    if (ctx->element_order(beta) == target) order_set.push_back(beta);
  }
  std::sort(image.begin(), image.end());
  image.erase(std::unique(image.begin(), image.end()), image.end());

  if (image != order_set)
    throw IdentityViolation(
        "image_order_set",
        "image of the order-" + b.str() + " stratum under " + r.str() +
            " is not the order-" + target.str() + " stratum");
  mpz_class expect = eucl::euler_phi(target);
  if (mpz_class(static_cast<unsigned long>(image.size())) != expect)
    throw IdentityViolation(
        "image_order_set_size",
        "stratum size " + std::to_string(image.size()) +
            " differs from totient " + expect.get_str());
  return {std::move(image), std::move(order_set)};
}

bool n_primitive_test(const std::shared_ptr<const ModuleCtx>& ctx,
                      uint64_t elem, const eucl::RingElem& n) {
  require_divisor(ctx, n, "order parameter n");
  if (!ctx->contains(elem))
    throw std::domain_error("element is not in the module carrier");
  return ctx->element_order(elem) == eucl::div_exact(ctx->exponent(), n);
}

FreenessReport enumerate_free(const std::shared_ptr<const ModuleCtx>& ctx,
                              const FreenessQuery& q, bool with_elements) {
  const auto& mask = def_free_mask(ctx, q);
  FreenessReport report{q, 0, std::nullopt, false};
  if (with_elements) report.elements.emplace();
  for (uint64_t elem : ctx->carrier()) {
    bool def = mask[elem] != 0;
    bool gcd = is_free_gcd(ctx, elem, q);
    if (def != gcd)
      throw IdentityViolation(
          "freeness_def_vs_gcd",
          "element index " + std::to_string(elem) + " for r=" + q.r.str() +
              ", n=" + q.n.str() + ": definitional route says " +
              (def ? "free" : "not free") + ", gcd route disagrees");
    if (def) {
      ++report.count;
      if (with_elements) report.elements->push_back(elem);
    }
  }
  report.cross_checked = true;
  return report;
}

}  // namespace freefield::modfree
