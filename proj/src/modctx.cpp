#include "freefield/modctx.hpp"

#include <numeric>
#include <stdexcept>

#include "freefield/addmod.hpp"
#include "freefield/cycsum.hpp"
#include "freefield/errors.hpp"

namespace freefield::modfree {

namespace {

constexpr uint64_t kExhaustiveCheckLimit = 1ull << 16;

std::vector<int64_t> constant_check_reduce(const std::vector<int64_t>& bucket,
                                           uint64_t N) {
  auto plan = chars::CycPlan::get(N);
  return plan->reduce_i64(bucket);
}

int64_t require_constant(const std::vector<int64_t>& reduced,
                         const std::string& what) {
  for (size_t k = 1; k < reduced.size(); ++k)
    if (reduced[k] != 0)
      throw IdentityViolation(
          "char_sum_rationality",
          what + ": a full conjugacy class of character values summed to an "
                 "irrational algebraic number");
  return reduced.empty() ? 0 : reduced[0];
}

}  // namespace

ModuleCtx::ModuleCtx(Kind kind, std::shared_ptr<const gf::FieldCtx> f)
    : kind_(kind), field_(std::move(f)) {
  cyc_modulus_ = std::lcm(field_->group_order() == 0 ? 1 : field_->group_order(),
                          static_cast<uint64_t>(field_->p()));
}

bool ModuleCtx::contains(uint64_t field_idx) const {
  if (field_idx >= field_->order()) return false;
  return kind_ == Kind::Additive || field_idx != 0;
}

const std::vector<eucl::RingElem>& ModuleCtx::exponent_divisors() const {
  std::lock_guard<std::mutex> lk(mctx_mutex_);
  if (divisors_memo_.empty()) divisors_memo_ = eucl::divisors(exponent_);
  return divisors_memo_;
}

const eucl::RingElem& ModuleCtx::element_order(uint64_t elem) const {
  if (!contains(elem))
    throw std::domain_error("element is not in the module carrier");
  const auto& divs = exponent_divisors();
  {
    std::lock_guard<std::mutex> lk(mctx_mutex_);
    if (order_memo_.empty()) order_memo_.assign(field_->order(), -1);
    if (order_memo_[elem] >= 0) return divs[order_memo_[elem]];
  }
  int32_t found = -1;
  for (size_t i = 0; i < divs.size(); ++i) {
    if (act(divs[i], elem) == identity_) {
      found = static_cast<int32_t>(i);
      break;
    }
  }
  if (found < 0)
    throw IdentityViolation("element_order",
                            "exponent failed to annihilate an element");
  std::lock_guard<std::mutex> lk(mctx_mutex_);
  order_memo_[elem] = found;
  return divs[found];
}

const eucl::RingElem& ModuleCtx::char_order(uint64_t chi_index) const {
  if (chi_index >= num_characters())
    throw std::domain_error("character index out of range");
  const auto& divs = exponent_divisors();
  {
    std::lock_guard<std::mutex> lk(mctx_mutex_);
    if (char_order_memo_.empty()) char_order_memo_.assign(size_u64_, -1);
    if (char_order_memo_[chi_index] >= 0)
      return divs[char_order_memo_[chi_index]];
  }
  eucl::RingElem ord = compute_char_order(chi_index);
  int32_t slot = -1;
  for (size_t i = 0; i < divs.size(); ++i)
    if (divs[i] == ord) {
      slot = static_cast<int32_t>(i);
      break;
    }
  if (slot < 0)
    throw IdentityViolation("char_order",
                            "character order is not a divisor of the exponent");
  std::lock_guard<std::mutex> lk(mctx_mutex_);
  char_order_memo_[chi_index] = slot;
  return divs[slot];
}

const std::vector<uint64_t>& ModuleCtx::chars_with_order(
    const eucl::RingElem& t) const {
  {
    std::lock_guard<std::mutex> lk(mctx_mutex_);
    if (char_orders_verified_) {
      auto it = chars_by_order_.find(t);
      if (it == chars_by_order_.end())
        throw std::domain_error(
            "character order is not a divisor of the exponent");
      return it->second;
    }
  }
  // First use: classify every character and verify each class has exactly
  // totient(t) members, as the dual-module structure demands.
  std::map<eucl::RingElem, std::vector<uint64_t>, eucl::RingElemLess> buckets;
  for (const auto& d : exponent_divisors()) buckets[d];  // all divisors present
  for (uint64_t j = 0; j < num_characters(); ++j)
    buckets[char_order(j)].push_back(j);
  for (const auto& [d, js] : buckets) {
    mpz_class expect = eucl::euler_phi(d);
    if (mpz_class(static_cast<unsigned long>(js.size())) != expect)
      throw IdentityViolation(
          "char_order_class_size",
          "characters of order " + d.str() + ": found " +
              std::to_string(js.size()) + ", totient demands " +
              expect.get_str());
  }
  std::lock_guard<std::mutex> lk(mctx_mutex_);
  if (!char_orders_verified_) {
    chars_by_order_ = std::move(buckets);
    char_orders_verified_ = true;
  }
  auto it = chars_by_order_.find(t);
  if (it == chars_by_order_.end())
    throw std::domain_error("character order is not a divisor of the exponent");
  return it->second;
}

void ModuleCtx::verify_structure() {
  if (carrier_.empty() || !contains(identity_) || !contains(generator_))
    throw IdentityViolation("module_structure", "carrier is malformed");
  if (field_->order() <= kExhaustiveCheckLimit) {
    for (uint64_t elem : carrier_)
      if (act(exponent_, elem) != identity_)
        throw IdentityViolation(
            "module_exponent",
            "exponent does not annihilate element index " +
                std::to_string(elem));
  } else if (act(exponent_, generator_) != identity_) {
    throw IdentityViolation("module_exponent",
                            "exponent does not annihilate the generator");
  }
}

// ---------------------------------------------------------------------------

class MultModule final : public ModuleCtx {
 public:
  explicit MultModule(std::shared_ptr<const gf::FieldCtx> f)
      : ModuleCtx(Kind::Multiplicative, std::move(f)) {
    const uint64_t Q = field_->group_order();
    exponent_ = eucl::RingElem::integer(
        mpz_class(static_cast<unsigned long>(Q == 0 ? 1 : Q)));
    size_ = mpz_class(static_cast<unsigned long>(Q));
    size_u64_ = Q;
    char_root_order_ = Q;
    carrier_.reserve(Q);
    for (uint64_t idx = 1; idx < field_->order(); ++idx)
      carrier_.push_back(idx);
    identity_ = 1;
    generator_ = field_->generator_idx();
    if (field_->mult_order_idx(generator_) != Q)
      throw IdentityViolation("module_generator",
                              "canonical generator does not generate");
    verify_structure();
  }

  uint64_t act(const eucl::RingElem& r, uint64_t elem) const override {
    if (!r.is_integer())
      throw std::domain_error("multiplicative scalars are integers");
    if (!contains(elem))
      throw std::domain_error("element is not in the module carrier");
    const uint64_t Q = field_->group_order();
    mpz_class e = r.int_value() % static_cast<unsigned long>(Q);
    return field_->ext_field()->pow(elem, mpz_get_ui(e.get_mpz_t()));
  }

  uint64_t char_value_exp(uint64_t chi_index, uint64_t elem) const override {
    if (chi_index >= size_u64_)
      throw std::domain_error("character index out of range");
    if (!contains(elem))
      throw std::domain_error("character argument outside the carrier");
    const uint64_t Q = field_->group_order();
    // chi_j(g^k) = zeta_Q^(j k)
    unsigned __int128 prod =
        static_cast<unsigned __int128>(chi_index) * field_->dlog_idx(elem);
    return static_cast<uint64_t>(prod % Q);
  }

 protected:
  eucl::RingElem compute_char_order(uint64_t chi_index) const override {
    const uint64_t Q = field_->group_order();
    uint64_t g = std::gcd(chi_index, Q);
    return eucl::RingElem::integer(
        mpz_class(static_cast<unsigned long>(Q / g)));
  }

  int64_t compute_order_char_sum(const eucl::RingElem& t,
                                 uint64_t elem) const override {
    // sum over chi of exact order t of chi(g^k) collapses into Z[zeta_t]:
    // the contributing dual exponents are (Q/t) u with u a unit mod t.
    const uint64_t t_int = mpz_get_ui(t.int_value().get_mpz_t());
    const uint64_t k = field_->dlog_idx(elem) % t_int;
    std::vector<int64_t> bucket(t_int, 0);
    for (uint64_t u = 0; u < t_int; ++u)
      if (std::gcd(u, t_int) == 1)
        ++bucket[static_cast<size_t>((u * k) % t_int)];
    return require_constant(constant_check_reduce(bucket, t_int),
                            "multiplicative order-class sum at order " +
                                t.str());
  }
};

// ---------------------------------------------------------------------------

class AddModule final : public ModuleCtx {
 public:
  explicit AddModule(std::shared_ptr<const gf::FieldCtx> f)
      : ModuleCtx(Kind::Additive, std::move(f)) {
    exponent_ = field_->splitting_modulus();
    size_ = mpz_class(static_cast<unsigned long>(field_->order()));
    size_u64_ = field_->order();
    char_root_order_ = field_->p();
    carrier_.reserve(size_u64_);
    for (uint64_t idx = 0; idx < field_->order(); ++idx)
      carrier_.push_back(idx);
    identity_ = 0;
    generator_ = find_first_normal();
    if (field_->order() <= kExhaustiveCheckLimit) verify_generation();
    verify_structure();
  }

  uint64_t act(const eucl::RingElem& r, uint64_t elem) const override {
    if (!r.is_poly() ||
        !r.poly_value().field->same_field(*field_->base_field()))
      throw std::domain_error("additive scalars live in F_q[x]");
    if (!contains(elem))
      throw std::domain_error("element is not in the module carrier");
    FqPoly rem = fq_divmod(r.poly_value(), exponent_.poly_value()).second;
    return apply_raw(rem, elem);
  }

  uint64_t char_value_exp(uint64_t chi_index, uint64_t elem) const override {
    if (chi_index >= size_u64_)
      throw std::domain_error("character index out of range");
    if (!contains(elem))
      throw std::domain_error("character argument outside the carrier");
    // psi_beta(omega) = zeta_p^Tr(beta*omega)
    return field_->trace_idx(field_->ext_field()->mul(chi_index, elem));
  }

 protected:
  eucl::RingElem compute_char_order(uint64_t chi_index) const override {
    // Measured, not assumed: the smallest divisor d of x^m - 1 with
    // psi_beta(L_d(alpha)) = 1 for every alpha.
    for (const auto& d : exponent_divisors()) {
      const auto& img = divisor_image(d);
      bool annihilates = true;
      for (uint64_t alpha = 0; alpha < size_u64_; ++alpha) {
        if (field_->trace_idx(field_->ext_field()->mul(chi_index,
                                                       img[alpha])) != 0) {
          annihilates = false;
          break;
        }
      }
      if (annihilates) return d;
    }
    throw IdentityViolation("char_order",
                            "x^m - 1 failed to annihilate a character");
  }

  int64_t compute_order_char_sum(const eucl::RingElem& t,
                                 uint64_t elem) const override {
    const auto& chis = chars_with_order(t);
    std::vector<int64_t> bucket(field_->p(), 0);
    for (uint64_t chi : chis) ++bucket[char_value_exp(chi, elem)];
    return require_constant(constant_check_reduce(bucket, field_->p()),
                            "additive order-class sum at order " + t.str());
  }

 private:
  uint64_t apply_raw(const FqPoly& r, uint64_t elem) const {
    const auto& ext = *field_->ext_field();
    uint64_t acc = 0, frob = elem;
    for (size_t i = 0; i < r.coeffs.size(); ++i) {
      if (r.coeffs[i] != 0) acc = ext.add(acc, ext.scale(r.coeffs[i], frob));
      if (i + 1 < r.coeffs.size()) frob = field_->frobenius_q_idx(frob);
    }
    return acc;
  }

  uint64_t find_first_normal() const {
    for (uint64_t idx = 1; idx < field_->order(); ++idx)
      if (addmod::normal_test(gf::FFElem{field_, idx})) return idx;
    throw IdentityViolation("normal_scan", "no normal element found");
  }

  void verify_generation() const {
    // Explicit coverage: {L_r(g) : deg r < m} must be the whole carrier.
    std::vector<bool> seen(size_u64_, false);
    const auto& ext = *field_->ext_field();
    std::vector<uint64_t> frobs(field_->ext_degree());
    uint64_t cur = generator_;
    for (auto& f : frobs) {
      f = cur;
      cur = field_->frobenius_q_idx(cur);
    }
    const uint64_t q = field_->q();
    std::vector<uint64_t> digits(field_->ext_degree(), 0);
    while (true) {
      uint64_t acc = 0;
      for (size_t i = 0; i < digits.size(); ++i)
        if (digits[i] != 0) acc = ext.add(acc, ext.scale(digits[i], frobs[i]));
      seen[acc] = true;
      size_t i = 0;
      while (i < digits.size() && ++digits[i] == q) digits[i++] = 0;
      if (i == digits.size()) break;
    }
    for (uint64_t idx = 0; idx < size_u64_; ++idx)
      if (!seen[idx])
        throw IdentityViolation(
            "module_generation",
            "normal generator misses element index " + std::to_string(idx));
  }

  const std::vector<uint64_t>& divisor_image(const eucl::RingElem& d) const {
    std::lock_guard<std::mutex> lk(image_mutex_);
    auto it = divisor_images_.find(d);
    if (it != divisor_images_.end()) return it->second;
    std::vector<uint64_t> img(size_u64_);
    for (uint64_t alpha = 0; alpha < size_u64_; ++alpha)
      img[alpha] = apply_raw(d.poly_value(), alpha);
    return divisor_images_.emplace(d, std::move(img)).first->second;
  }

  mutable std::mutex image_mutex_;
  mutable std::map<eucl::RingElem, std::vector<uint64_t>, eucl::RingElemLess>
      divisor_images_;
};

// ---------------------------------------------------------------------------

int64_t ModuleCtx::order_char_sum(const eucl::RingElem& t,
                                  uint64_t elem) const {
  if (!divides(t, exponent_))
    throw std::domain_error("order-class sum needs a divisor of the exponent");
  if (kind_ == Kind::Multiplicative) {
    // Memo slot: k mod t fully determines the sum.
    const uint64_t t_int = mpz_get_ui(t.int_value().get_mpz_t());
    const uint64_t slot = field_->dlog_idx(elem) % t_int;
    {
      std::lock_guard<std::mutex> lk(char_sum_mutex_);
      auto it = char_sum_memo_.find(t);
      if (it != char_sum_memo_.end() && it->second[slot] != kUnset)
        return it->second[slot];
    }
    int64_t v = compute_order_char_sum(t, elem);
    std::lock_guard<std::mutex> lk(char_sum_mutex_);
    auto& tab = char_sum_memo_[t];
    if (tab.empty()) tab.assign(t_int, kUnset);
    tab[slot] = v;
    return v;
  }
  {
    std::lock_guard<std::mutex> lk(char_sum_mutex_);
    auto it = char_sum_memo_.find(t);
    if (it != char_sum_memo_.end() && it->second[elem] != kUnset)
      return it->second[elem];
  }
  int64_t v = compute_order_char_sum(t, elem);
  std::lock_guard<std::mutex> lk(char_sum_mutex_);
  auto& tab = char_sum_memo_[t];
  if (tab.empty()) tab.assign(size_u64_, kUnset);
  tab[elem] = v;
  return v;
}

const std::vector<char>& ModuleCtx::free_mask_for(
    const eucl::RingElem& r, const eucl::RingElem& n,
    const std::function<std::vector<char>()>& build) const {
  {
    std::lock_guard<std::mutex> lk(mask_mutex_);
    auto it = free_mask_memo_.find({r, n});
    if (it != free_mask_memo_.end()) return it->second;
  }
  std::vector<char> mask = build();
  std::lock_guard<std::mutex> lk(mask_mutex_);
  return free_mask_memo_.emplace(std::make_pair(r, n), std::move(mask))
      .first->second;
}

std::shared_ptr<const ModuleCtx> build_mult_module(
    std::shared_ptr<const gf::FieldCtx> field) {
  return std::make_shared<MultModule>(std::move(field));
}

std::shared_ptr<const ModuleCtx> build_add_module(
    std::shared_ptr<const gf::FieldCtx> field) {
  return std::make_shared<AddModule>(std::move(field));
}

}  // namespace freefield::modfree
