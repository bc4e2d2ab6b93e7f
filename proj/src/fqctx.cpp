#include "freefield/fqctx.hpp"

#include <stdexcept>
#include <string>

#include "freefield/errors.hpp"

namespace freefield {

namespace {

constexpr uint64_t kMaxFieldSize = 1ull << 40;  // hard overflow guard
constexpr uint64_t kMulTableMax = 1024;         // q*q uint32 entries = 4 MiB
constexpr uint64_t kInvTableMax = 1 << 16;

bool small_prime_check(uint32_t p) {
  if (p < 2) return false;
  for (uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

}  // namespace

std::shared_ptr<const FqCtx> FqCtx::prime(uint32_t p) {
  if (!small_prime_check(p))
    throw std::domain_error("characteristic " + std::to_string(p) +
                            " is not prime");
  auto ctx = std::shared_ptr<FqCtx>(new FqCtx());
  ctx->p_ = p;
  ctx->q_ = p;
  ctx->degree_ = 1;
  ctx->abs_degree_ = 1;
  ctx->build_tables();
  return ctx;
}

std::shared_ptr<const FqCtx> FqCtx::extension(std::shared_ptr<const FqCtx> base,
                                              std::vector<uint64_t> modulus) {
  if (!base) throw std::domain_error("extension requires a base field");
  if (modulus.size() < 2)
    throw std::domain_error("extension modulus must have degree >= 1");
  if (modulus.back() != 1)
    throw std::domain_error("extension modulus must be monic");
  for (uint64_t c : modulus)
    if (c >= base->q()) throw std::domain_error("modulus digit out of range");

  auto ctx = std::shared_ptr<FqCtx>(new FqCtx());
  ctx->p_ = base->p();
  ctx->degree_ = static_cast<uint32_t>(modulus.size() - 1);
  ctx->abs_degree_ = base->abs_degree() * ctx->degree_;
  ctx->base_ = std::move(base);
  ctx->modulus_ = std::move(modulus);

  uint64_t q = 1;
  for (uint32_t i = 0; i < ctx->degree_; ++i) {
    if (q > kMaxFieldSize / ctx->base_->q())
      throw std::domain_error("field size exceeds representable range");
    q *= ctx->base_->q();
  }
  ctx->q_ = q;
  ctx->build_tables();
  return ctx;
}

void FqCtx::build_tables() {
  if (is_prime_field()) {
    if (q_ <= 4096) {
      inv_table_.assign(q_, 0);
      for (uint64_t a = 1; a < q_; ++a)
        inv_table_[a] = static_cast<uint32_t>(pow(a, q_ - 2));
    }
    return;
  }
  if (q_ <= kMulTableMax) {
    mul_table_.assign(q_ * q_, 0);
    for (uint64_t a = 0; a < q_; ++a)
      for (uint64_t b = 0; b <= a; ++b) {
        uint32_t v = static_cast<uint32_t>(mul_generic(a, b));
        mul_table_[a * q_ + b] = v;
        mul_table_[b * q_ + a] = v;
      }
  }
  if (q_ <= kInvTableMax && !mul_table_.empty()) {
    inv_table_.assign(q_, 0);
    for (uint64_t a = 1; a < q_; ++a)
      inv_table_[a] = static_cast<uint32_t>(pow(a, q_ - 2));
  }
}

uint64_t FqCtx::add(uint64_t a, uint64_t b) const {
  if (is_prime_field()) {
    uint64_t s = a + b;
    return s >= q_ ? s - q_ : s;
  }
  // Digitwise base-field addition; packing is positional so digits can be
  // peeled off with div/mod by base q.
  uint64_t bq = base_->q(), out = 0, mult = 1;
  while (a || b) {
    out += base_->add(a % bq, b % bq) * mult;
    a /= bq;
    b /= bq;
    mult *= bq;
  }
  return out;
}

uint64_t FqCtx::neg(uint64_t a) const {
  if (is_prime_field()) return a == 0 ? 0 : q_ - a;
  uint64_t bq = base_->q(), out = 0, mult = 1;
  while (a) {
    out += base_->neg(a % bq) * mult;
    a /= bq;
    mult *= bq;
  }
  return out;
}

uint64_t FqCtx::sub(uint64_t a, uint64_t b) const { return add(a, neg(b)); }

uint64_t FqCtx::mul(uint64_t a, uint64_t b) const {
  if (is_prime_field()) return (a * b) % q_;
  if (!mul_table_.empty()) return mul_table_[a * q_ + b];
  return mul_generic(a, b);
}

uint64_t FqCtx::mul_generic(uint64_t a, uint64_t b) const {
  if (a == 0 || b == 0) return 0;
  std::vector<uint64_t> da = unpack(a), db = unpack(b);
  std::vector<uint64_t> prod(2 * degree_ - 1, 0);
  for (uint32_t i = 0; i < degree_; ++i) {
    if (da[i] == 0) continue;
    for (uint32_t j = 0; j < degree_; ++j)
      prod[i + j] = base_->add(prod[i + j], base_->mul(da[i], db[j]));
  }
  // Reduce by the monic modulus from the top down.
  for (uint32_t i = 2 * degree_ - 2; i >= degree_; --i) {
    uint64_t c = prod[i];
    if (c == 0) continue;
    prod[i] = 0;
    for (uint32_t j = 0; j < degree_; ++j)
      prod[i - degree_ + j] =
          base_->sub(prod[i - degree_ + j], base_->mul(c, modulus_[j]));
  }
  prod.resize(degree_);
  return pack(prod);
}

uint64_t FqCtx::inv(uint64_t a) const {
  if (a == 0) throw std::domain_error("inverse of zero");
  if (!inv_table_.empty()) return inv_table_[a];
  return pow(a, q_ - 2);
}

uint64_t FqCtx::pow(uint64_t a, uint64_t e) const {
  uint64_t acc = 1;
  while (e) {
    if (e & 1) acc = mul(acc, a);
    a = mul(a, a);
    e >>= 1;
  }
  return acc;
}

uint64_t FqCtx::scale(uint64_t base_c, uint64_t a) const {
  if (is_prime_field()) return mul(base_c, a);
  if (base_c == 0 || a == 0) return 0;
  uint64_t bq = base_->q(), out = 0, mult = 1;
  while (a) {
    out += base_->mul(base_c, a % bq) * mult;
    a /= bq;
    mult *= bq;
  }
  return out;
}

uint64_t FqCtx::from_int(long long n) const {
  long long r = n % static_cast<long long>(p_);
  if (r < 0) r += p_;
  return static_cast<uint64_t>(r);  // prime-subfield elements embed as-is
}

std::vector<uint64_t> FqCtx::unpack(uint64_t a) const {
  std::vector<uint64_t> digits(degree_, 0);
  if (is_prime_field()) {
    digits[0] = a;
    return digits;
  }
  uint64_t bq = base_->q();
  for (uint32_t i = 0; i < degree_; ++i) {
    digits[i] = a % bq;
    a /= bq;
  }
  return digits;
}

uint64_t FqCtx::pack(const std::vector<uint64_t>& digits) const {
  if (digits.size() > degree_)
    throw std::domain_error("too many digits for field degree");
  uint64_t bq = is_prime_field() ? q_ : base_->q();
  uint64_t out = 0, mult = 1;
  for (uint64_t d : digits) {
    if (d >= bq) throw std::domain_error("digit out of base-field range");
    out += d * mult;
    mult *= bq;
  }
  return out;
}

bool FqCtx::same_field(const FqCtx& other) const {
  if (this == &other) return true;
  if (p_ != other.p_ || q_ != other.q_ || degree_ != other.degree_)
    return false;
  if (modulus_ != other.modulus_) return false;
  if (is_prime_field() != other.is_prime_field()) return false;
  if (is_prime_field()) return true;
  return base_->same_field(*other.base_);
}

}  // namespace freefield
