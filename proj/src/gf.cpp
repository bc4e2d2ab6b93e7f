#include "freefield/gf.hpp"

#include <limits>
#include <map>
#include <stdexcept>
#include <tuple>
#include <unordered_map>

#include "freefield/errors.hpp"

namespace freefield::gf {

namespace {

std::mutex g_registry_mutex;
std::map<std::tuple<uint32_t, uint32_t, uint32_t>,
         std::shared_ptr<const FieldCtx>>
    g_registry;

}  // namespace

FqPoly find_irreducible(const std::shared_ptr<const FqCtx>& base,
                        uint32_t degree) {
  if (degree == 0) throw std::domain_error("irreducible of degree 0");
  const uint64_t q = base->q();
  std::vector<uint64_t> c(degree + 1, 0);
  c[degree] = 1;
  while (true) {
    FqPoly cand{base, c};
    if (fq_is_irreducible(cand)) return cand;
    size_t i = 0;
    while (i < degree && ++c[i] == q) c[i++] = 0;
    if (i == degree)
      throw IdentityViolation("irreducible_scan",
                              "no monic irreducible of degree " +
                                  std::to_string(degree) + " over a field of " +
                                  std::to_string(q) + " elements");
  }
}

std::shared_ptr<const FieldCtx> build_field(uint32_t p, uint32_t base_degree,
                                            uint32_t ext_degree, uint64_t cap) {
  if (base_degree == 0 || ext_degree == 0)
    throw std::domain_error("field degrees must be >= 1");

  {
    std::lock_guard<std::mutex> lk(g_registry_mutex);
    auto it = g_registry.find({p, base_degree, ext_degree});
    if (it != g_registry.end()) {
      if (it->second->order() > cap)
        throw CapExceeded(it->second->order(), cap);
      return it->second;
    }
  }

  // Guard q^m against the cap before building anything big.  The full size is
  // computed exactly so the exception can report what was actually requested.
  mpz_class full_order;
  mpz_ui_pow_ui(full_order.get_mpz_t(), p, base_degree * ext_degree);
  if (full_order > mpz_class(static_cast<unsigned long>(cap))) {
    uint64_t requested = full_order.fits_ulong_p()
                             ? static_cast<uint64_t>(full_order.get_ui())
                             : std::numeric_limits<uint64_t>::max();
    throw CapExceeded(requested, cap);
  }
  uint64_t order = static_cast<uint64_t>(full_order.get_ui());

  auto ctx = std::shared_ptr<FieldCtx>(new FieldCtx());
  ctx->p_ = p;
  ctx->base_degree_ = base_degree;
  ctx->ext_degree_ = ext_degree;
  ctx->cap_ = cap;
  ctx->prime_ = FqCtx::prime(p);

  if (base_degree == 1) {
    ctx->base_ = ctx->prime_;
    ctx->base_modulus_ = fq_x(ctx->prime_);  // recorded for reporting only
  } else {
    ctx->base_modulus_ = find_irreducible(ctx->prime_, base_degree);
    ctx->base_ = FqCtx::extension(ctx->prime_, ctx->base_modulus_.coeffs);
  }
  ctx->q_ = ctx->base_->q();

  ctx->ext_modulus_ = find_irreducible(ctx->base_, ext_degree);
  ctx->ext_ = FqCtx::extension(ctx->base_, ctx->ext_modulus_.coeffs);
  ctx->order_ = ctx->ext_->q();
  ctx->group_order_ = ctx->order_ - 1;

  if (ctx->order_ != order)
    throw IdentityViolation("field_order",
                            "tower order disagrees with p^(d*m)");
  if (base_degree > 1 && !fq_is_irreducible(ctx->base_modulus_))
    throw IdentityViolation("field_modulus", "base modulus not irreducible");
  if (!fq_is_irreducible(ctx->ext_modulus_))
    throw IdentityViolation("field_modulus", "extension modulus not irreducible");

  std::lock_guard<std::mutex> lk(g_registry_mutex);
  auto [it, inserted] =
      g_registry.try_emplace({p, base_degree, ext_degree}, ctx);
  return it->second;
}

uint64_t FieldCtx::generator_idx() const {
  {
    std::lock_guard<std::mutex> lk(cache_mutex_);
    if (generator_) return *generator_;
  }
  // Smallest element index of multiplicative order q^m - 1; the scan uses
  // mult_order_idx, which relies only on exponent arithmetic.
  uint64_t g = 0;
  for (uint64_t idx = 1; idx < order_; ++idx) {
    if (mult_order_idx(idx) == group_order_) {
      g = idx;
      break;
    }
  }
  if (g == 0 && group_order_ > 1)
    throw IdentityViolation("generator_scan", "no multiplicative generator");
  if (group_order_ == 1) g = 1;
  std::lock_guard<std::mutex> lk(cache_mutex_);
  generator_ = g;
  return g;
}

uint64_t FieldCtx::dlog_idx(uint64_t idx) const {
  if (idx == 0) throw std::domain_error("discrete log of zero");
  {
    std::lock_guard<std::mutex> lk(cache_mutex_);
    if (!dlog_table_.empty()) return dlog_table_[idx];
  }
  uint64_t g = generator_idx();
  std::vector<uint32_t> table(order_, 0);
  std::vector<bool> seen(order_, false);
  uint64_t cur = 1;
  for (uint64_t k = 0; k < group_order_; ++k) {
    if (seen[cur])
      throw IdentityViolation("generator_walk",
                              "generator walk revisited an element early");
    seen[cur] = true;
    table[cur] = static_cast<uint32_t>(k);
    cur = ext_->mul(cur, g);
  }
  if (cur != 1)
    throw IdentityViolation("generator_walk",
                            "generator walk did not close after q^m - 1 steps");
  std::lock_guard<std::mutex> lk(cache_mutex_);
  if (dlog_table_.empty()) dlog_table_ = std::move(table);
  return dlog_table_[idx];
}

uint64_t FieldCtx::mult_order_idx(uint64_t idx) const {
  if (idx == 0) throw std::domain_error("multiplicative order of zero");
  {
    std::lock_guard<std::mutex> lk(cache_mutex_);
    if (order_table_.empty()) order_table_.assign(order_, 0);
    if (order_table_[idx] != 0) return order_table_[idx];
  }
  // Start from the group order and strip primes while the power stays 1.
  uint64_t ord = group_order_;
  for (const auto& [pe, e] : group_order_factorization().factors) {
    uint64_t prime = mpz_get_ui(pe.int_value().get_mpz_t());
    for (uint32_t i = 0; i < e; ++i) {
      if (ext_->pow(idx, ord / prime) == 1)
        ord /= prime;
      else
        break;
    }
  }
  if (ext_->pow(idx, ord) != 1)
    throw IdentityViolation("mult_order", "candidate order does not annihilate");
  std::lock_guard<std::mutex> lk(cache_mutex_);
  order_table_[idx] = ord;
  return ord;
}

uint64_t FieldCtx::frobenius_q_idx(uint64_t idx) const {
  {
    std::lock_guard<std::mutex> lk(cache_mutex_);
    if (frob_basis_.empty()) {
      frob_basis_.reserve(ext_degree_);
      for (uint32_t i = 0; i < ext_degree_; ++i) {
        uint64_t basis = 1;
        for (uint32_t j = 0; j < i; ++j) basis *= q_;  // packed x^i
        frob_basis_.push_back(ext_->pow(basis, q_));
      }
    }
  }
  auto digits = ext_->unpack(idx);
  uint64_t acc = 0;
  for (uint32_t i = 0; i < ext_degree_; ++i) {
    if (digits[i] == 0) continue;
    acc = ext_->add(acc, ext_->scale(digits[i], frob_basis_[i]));
  }
  return acc;
}

uint64_t FieldCtx::pth_power_idx(uint64_t idx) const {
  return ext_->pow(idx, p_);
}

uint64_t FieldCtx::pth_root_idx(uint64_t idx) const {
  // alpha -> alpha^(p^(dm-1)) inverts the p-power map on F_{p^(dm)}.
  uint64_t out = idx;
  for (uint32_t i = 0; i + 1 < base_degree_ * ext_degree_; ++i)
    out = pth_power_idx(out);
  return out;
}

uint32_t FieldCtx::trace_idx(uint64_t idx) const {
  {
    std::lock_guard<std::mutex> lk(cache_mutex_);
    if (!trace_table_.empty()) return trace_table_[idx];
  }
  auto compute = [&](uint64_t a) -> uint32_t {
    uint64_t acc = 0, cur = a;
    for (uint32_t i = 0; i < base_degree_ * ext_degree_; ++i) {
      acc = ext_->add(acc, cur);
      cur = pth_power_idx(cur);
    }
    if (cur != a)
      throw IdentityViolation("trace_orbit", "p-power orbit did not close");
    if (acc >= p_)
      throw IdentityViolation("trace_range",
                              "absolute trace landed outside the prime field");
    return static_cast<uint32_t>(acc);
  };
  if (order_ <= (1u << 16)) {
    std::vector<uint32_t> table(order_);
    for (uint64_t a = 0; a < order_; ++a) table[a] = compute(a);
    std::lock_guard<std::mutex> lk(cache_mutex_);
    if (trace_table_.empty()) trace_table_ = std::move(table);
    return trace_table_[idx];
  }
  return compute(idx);
}

const eucl::Factorization& FieldCtx::group_order_factorization() const {
  {
    std::lock_guard<std::mutex> lk(cache_mutex_);
    if (group_factorization_) return *group_factorization_;
  }
  auto fact = eucl::factorize(eucl::RingElem::integer(
      mpz_class(static_cast<unsigned long>(group_order_))));
  std::lock_guard<std::mutex> lk(cache_mutex_);
  if (!group_factorization_) group_factorization_ = std::move(fact);
  return *group_factorization_;
}

const eucl::RingElem& FieldCtx::splitting_modulus() const {
  std::lock_guard<std::mutex> lk(cache_mutex_);
  if (!splitting_modulus_elem_) {
    FqPoly xm1 = fq_monomial(base_, ext_degree_, 1);
    xm1 = fq_sub(xm1, fq_const(base_, 1));
    splitting_modulus_elem_ = eucl::RingElem::poly(std::move(xm1));
  }
  return *splitting_modulus_elem_;
}

const std::vector<eucl::RingElem>& FieldCtx::group_order_divisors() const {
  {
    std::lock_guard<std::mutex> lk(cache_mutex_);
    if (!group_divisors_.empty()) return group_divisors_;
  }
  auto divs = eucl::divisors(eucl::RingElem::integer(
      mpz_class(static_cast<unsigned long>(group_order_))));
  std::lock_guard<std::mutex> lk(cache_mutex_);
  if (group_divisors_.empty()) group_divisors_ = std::move(divs);
  return group_divisors_;
}

const std::vector<eucl::RingElem>& FieldCtx::splitting_modulus_divisors()
    const {
  {
    std::lock_guard<std::mutex> lk(cache_mutex_);
    if (!xm1_divisors_.empty()) return xm1_divisors_;
  }
  auto divs = eucl::divisors(splitting_modulus());
  std::lock_guard<std::mutex> lk(cache_mutex_);
  if (xm1_divisors_.empty()) xm1_divisors_ = std::move(divs);
  return xm1_divisors_;
}

bool operator==(const FFElem& a, const FFElem& b) {
  return a.ctx.get() == b.ctx.get() ? a.idx == b.idx
                                    : (a.ctx && b.ctx &&
                                       a.ctx->ext_field()->same_field(
                                           *b.ctx->ext_field()) &&
                                       a.idx == b.idx);
}

FFElem make_elem(std::shared_ptr<const FieldCtx> ctx, uint64_t idx) {
  if (idx >= ctx->order()) throw std::domain_error("element index out of range");
  return {std::move(ctx), idx};
}

FFElem operator+(const FFElem& a, const FFElem& b) {
  return {a.ctx, a.ctx->ext_field()->add(a.idx, b.idx)};
}

FFElem operator-(const FFElem& a, const FFElem& b) {
  return {a.ctx, a.ctx->ext_field()->sub(a.idx, b.idx)};
}

FFElem operator*(const FFElem& a, const FFElem& b) {
  return {a.ctx, a.ctx->ext_field()->mul(a.idx, b.idx)};
}

FFElem operator-(const FFElem& a) {
  return {a.ctx, a.ctx->ext_field()->neg(a.idx)};
}

FFElem ff_inv(const FFElem& a) { return {a.ctx, a.ctx->ext_field()->inv(a.idx)}; }

FFElem ff_pow(const FFElem& a, const mpz_class& e) {
  if (a.is_zero()) {
    if (e <= 0) throw std::domain_error("zero to a nonpositive power");
    return a;
  }
  // Reduce the exponent modulo the group order, allowing negatives.
  mpz_class m = e % static_cast<unsigned long>(a.ctx->group_order());
  if (m < 0) m += static_cast<unsigned long>(a.ctx->group_order());
  return {a.ctx, a.ctx->ext_field()->pow(a.idx, mpz_get_ui(m.get_mpz_t()))};
}

uint64_t mult_order(const FFElem& a) { return a.ctx->mult_order_idx(a.idx); }

FFElem find_generator(const std::shared_ptr<const FieldCtx>& ctx) {
  return {ctx, ctx->generator_idx()};
}

uint64_t dlog(const FFElem& alpha, const FFElem& g) {
  if (alpha.is_zero() || g.is_zero())
    throw std::domain_error("discrete log requires nonzero arguments");
  const auto& F = *alpha.ctx->ext_field();
  const uint64_t n = mult_order(g);
  // Baby-step giant-step over the cyclic group generated by g.
  uint64_t s = 1;
  while (s * s < n) ++s;
  std::unordered_map<uint64_t, uint64_t> baby;
  baby.reserve(s * 2);
  uint64_t cur = 1;
  for (uint64_t j = 0; j < s; ++j) {
    baby.emplace(cur, j);
    cur = F.mul(cur, g.idx);
  }
  const uint64_t giant = F.inv(cur);  // g^-s
  uint64_t gamma = alpha.idx;
  for (uint64_t i = 0; i <= s; ++i) {
    auto it = baby.find(gamma);
    if (it != baby.end()) {
      uint64_t k = i * s + it->second;
      if (F.pow(g.idx, k) != alpha.idx)
        throw IdentityViolation("dlog", "baby-step giant-step disagreement");
      return k;
    }
    gamma = F.mul(gamma, giant);
  }
  throw std::domain_error("element is not a power of the given base");
}

FFElem frobenius(const FFElem& a, uint32_t i) {
  uint64_t out = a.idx;
  uint32_t steps = a.ctx->ext_degree() ? i % a.ctx->ext_degree() : 0;
  for (uint32_t k = 0; k < steps; ++k) out = a.ctx->frobenius_q_idx(out);
  return {a.ctx, out};
}

uint32_t trace_to_prime(const FFElem& a) { return a.ctx->trace_idx(a.idx); }

}  // namespace freefield::gf
