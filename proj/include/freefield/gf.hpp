#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "freefield/eucl.hpp"
#include "freefield/fqctx.hpp"
#include "freefield/fqpoly.hpp"

namespace freefield::gf {

inline constexpr uint64_t kDefaultCap = 1ull << 20;

/// The tower F_p < F_q < F_{q^m} with q = p^base_degree, built from
/// deterministically chosen moduli (the smallest monic irreducible of the
/// required degree at each step).  Shared, immutable, with internal
/// write-once caches; safe to use from several threads.
class FieldCtx : public std::enable_shared_from_this<FieldCtx> {
 public:
  uint32_t p() const { return p_; }
  uint32_t base_degree() const { return base_degree_; }
  uint32_t ext_degree() const { return ext_degree_; }
  uint64_t q() const { return q_; }
  uint64_t order() const { return order_; }              // q^m
  uint64_t group_order() const { return group_order_; }  // q^m - 1
  uint64_t cap() const { return cap_; }

  const std::shared_ptr<const FqCtx>& prime_field() const { return prime_; }
  const std::shared_ptr<const FqCtx>& base_field() const { return base_; }
  const std::shared_ptr<const FqCtx>& ext_field() const { return ext_; }
  /// Modulus of F_q over F_p (the polynomial y when base_degree == 1).
  const FqPoly& base_modulus() const { return base_modulus_; }
  /// Modulus of F_{q^m} over F_q.
  const FqPoly& ext_modulus() const { return ext_modulus_; }

  /// Smallest generator of the multiplicative group (by element index).
  uint64_t generator_idx() const;
  /// Discrete log base the canonical generator; input != 0.
  uint64_t dlog_idx(uint64_t idx) const;
  /// Multiplicative order; input != 0.  Cached.
  uint64_t mult_order_idx(uint64_t idx) const;
  /// alpha -> alpha^q (the F_q-linear Frobenius), via cached basis images.
  uint64_t frobenius_q_idx(uint64_t idx) const;
  uint64_t pth_power_idx(uint64_t idx) const;
  uint64_t pth_root_idx(uint64_t idx) const;
  /// Absolute trace down to F_p, returned as an integer in [0, p).
  uint32_t trace_idx(uint64_t idx) const;

  /// Cached factorization of q^m - 1.
  const eucl::Factorization& group_order_factorization() const;
  /// Sorted normalized divisors of q^m - 1 (integer ring).
  const std::vector<eucl::RingElem>& group_order_divisors() const;
  /// Sorted monic divisors of x^m - 1 over F_q (polynomial ring).
  const std::vector<eucl::RingElem>& splitting_modulus_divisors() const;
  /// x^m - 1 over F_q as a normalized ring element.
  const eucl::RingElem& splitting_modulus() const;

 private:
  friend std::shared_ptr<const FieldCtx> build_field(uint32_t, uint32_t,
                                                     uint32_t, uint64_t);
  FieldCtx() = default;

  uint32_t p_ = 0, base_degree_ = 1, ext_degree_ = 1;
  uint64_t q_ = 0, order_ = 0, group_order_ = 0, cap_ = kDefaultCap;
  std::shared_ptr<const FqCtx> prime_, base_, ext_;
  FqPoly base_modulus_, ext_modulus_;

  mutable std::mutex cache_mutex_;
  mutable std::optional<uint64_t> generator_;
  mutable std::vector<uint32_t> dlog_table_;
  mutable std::vector<uint64_t> order_table_;
  mutable std::vector<uint64_t> frob_basis_;   // (x^i)^q images
  mutable std::vector<uint32_t> trace_table_;
  mutable std::optional<eucl::RingElem> splitting_modulus_elem_;
  mutable std::optional<eucl::Factorization> group_factorization_;
  mutable std::vector<eucl::RingElem> group_divisors_;
  mutable std::vector<eucl::RingElem> xm1_divisors_;
};

/// An element of F_{q^m} bound to its tower.  Index semantics follow FqCtx
/// packing: ascending index is the canonical enumeration order.
struct FFElem {
  std::shared_ptr<const FieldCtx> ctx;
  uint64_t idx = 0;

  bool is_zero() const { return idx == 0; }
};

bool operator==(const FFElem& a, const FFElem& b);
FFElem operator+(const FFElem& a, const FFElem& b);
FFElem operator-(const FFElem& a, const FFElem& b);
FFElem operator*(const FFElem& a, const FFElem& b);
FFElem operator-(const FFElem& a);
FFElem ff_inv(const FFElem& a);
FFElem ff_pow(const FFElem& a, const mpz_class& e);
FFElem make_elem(std::shared_ptr<const FieldCtx> ctx, uint64_t idx);

/// Builds (and caches process-wide) the tower for p^(base_degree*ext_degree),
/// refusing construction when the field order would exceed `cap`.
std::shared_ptr<const FieldCtx> build_field(uint32_t p, uint32_t base_degree,
                                            uint32_t ext_degree,
                                            uint64_t cap = kDefaultCap);

/// Smallest monic irreducible of the given degree over `base`, by exhaustive
/// scan in the canonical order.
FqPoly find_irreducible(const std::shared_ptr<const FqCtx>& base,
                        uint32_t degree);

uint64_t mult_order(const FFElem& a);
FFElem find_generator(const std::shared_ptr<const FieldCtx>& ctx);
/// Baby-step giant-step discrete log of alpha base g; both nonzero, g a
/// generator or at least an element whose cyclic group contains alpha.
uint64_t dlog(const FFElem& alpha, const FFElem& g);
FFElem frobenius(const FFElem& a, uint32_t i);
uint32_t trace_to_prime(const FFElem& a);

}  // namespace freefield::gf
