#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "freefield/eucl.hpp"
#include "freefield/gf.hpp"

namespace freefield::modfree {

/// A finite cyclic module over a Euclidean domain, concretely one of:
///  - the multiplicative group of F_{q^m}, a Z-module with exponent q^m - 1,
///    scalars acting by powering;
///  - the additive group of F_{q^m}, an F_q[x]-module with exponent x^m - 1,
///    scalars acting through q-associates.
/// Both are generated by one element (a primitive root / a normal element).
/// The context also owns the dual side: its characters, their orders, and
/// exact memoized sums of all characters of a given order at a point.
class ModuleCtx : public std::enable_shared_from_this<ModuleCtx> {
 public:
  enum class Kind { Multiplicative, Additive };

  virtual ~ModuleCtx() = default;

  Kind kind() const { return kind_; }
  const std::shared_ptr<const gf::FieldCtx>& field() const { return field_; }
  /// Annihilator generator: q^m - 1 or x^m - 1.
  const eucl::RingElem& exponent() const { return exponent_; }
  mpz_class size() const { return size_; }
  uint64_t size_u64() const { return size_u64_; }
  /// Element indices in canonical ascending order (field-element indices).
  const std::vector<uint64_t>& carrier() const { return carrier_; }
  uint64_t identity_elem() const { return identity_; }
  uint64_t generator_elem() const { return generator_; }
  bool contains(uint64_t field_idx) const;

  /// Scalar action r * elem; r is reduced modulo the exponent first.
  virtual uint64_t act(const eucl::RingElem& r, uint64_t elem) const = 0;

  /// Order of an element: smallest normalized divisor d of the exponent
  /// with d * elem = identity.  Cached.
  const eucl::RingElem& element_order(uint64_t elem) const;

  /// Sorted normalized divisors of the exponent.
  const std::vector<eucl::RingElem>& exponent_divisors() const;

  // --- character primitives -------------------------------------------
  /// Character values live among the N-th roots of unity for
  /// N = lcm(q^m - 1, p); multiplicative characters only use the
  /// (q^m - 1)-part, additive ones only the p-part.
  uint64_t cyc_modulus() const { return cyc_modulus_; }
  /// Characters are indexed 0 .. size-1; index 0 is trivial.  For the
  /// multiplicative side the index is the dual exponent j; for the additive
  /// side it is the twist element beta.
  uint64_t num_characters() const { return size_u64_; }
  /// Order of the root of unity the raw exponent refers to (q^m - 1 or p).
  uint64_t char_root_order() const { return char_root_order_; }
  /// chi_index evaluated at elem, as an exponent of zeta_{char_root_order}.
  virtual uint64_t char_value_exp(uint64_t chi_index, uint64_t elem) const = 0;
  /// Order of a character in the dual module (cached; for the additive side
  /// measured by brute force as the smallest annihilating divisor).
  const eucl::RingElem& char_order(uint64_t chi_index) const;
  /// Indices of all characters of exact order t; sizes are verified against
  /// the totient of t once per context.
  const std::vector<uint64_t>& chars_with_order(const eucl::RingElem& t) const;
  /// Exact value of sum over characters of exact order t of chi(elem).
  /// The sum is a Galois-stable algebraic integer, hence a rational integer;
  /// non-integrality raises IdentityViolation.  Memoized.
  int64_t order_char_sum(const eucl::RingElem& t, uint64_t elem) const;

  /// Per-context memo slot for freeness masks keyed by (r, n); `build` runs
  /// at most once per key.
  const std::vector<char>& free_mask_for(
      const eucl::RingElem& r, const eucl::RingElem& n,
      const std::function<std::vector<char>()>& build) const;

 protected:
  ModuleCtx(Kind kind, std::shared_ptr<const gf::FieldCtx> f);

  virtual int64_t compute_order_char_sum(const eucl::RingElem& t,
                                         uint64_t elem) const = 0;
  virtual eucl::RingElem compute_char_order(uint64_t chi_index) const = 0;

  /// Called by subclass constructors once carrier/identity/generator are
  /// set; verifies generation and annihilation.
  void verify_structure();

  Kind kind_;
  std::shared_ptr<const gf::FieldCtx> field_;
  eucl::RingElem exponent_;
  mpz_class size_;
  uint64_t size_u64_ = 0;
  std::vector<uint64_t> carrier_;
  uint64_t identity_ = 0;
  uint64_t generator_ = 0;
  uint64_t cyc_modulus_ = 0;
  uint64_t char_root_order_ = 0;

  mutable std::mutex mctx_mutex_;
  mutable std::vector<int32_t> order_memo_;  // index into exponent_divisors
  mutable std::vector<eucl::RingElem> divisors_memo_;
  mutable std::vector<int32_t> char_order_memo_;
  mutable std::map<eucl::RingElem, std::vector<uint64_t>, eucl::RingElemLess>
      chars_by_order_;
  mutable bool char_orders_verified_ = false;
  // order_char_sum memo, one table per divisor; layout is kind-specific
  // (indexed by dlog mod t for the multiplicative side, by element for the
  // additive side).
  static constexpr int64_t kUnset = INT64_MIN;
  mutable std::mutex char_sum_mutex_;
  mutable std::map<eucl::RingElem, std::vector<int64_t>, eucl::RingElemLess>
      char_sum_memo_;

  struct RingElemPairLess {
    bool operator()(const std::pair<eucl::RingElem, eucl::RingElem>& a,
                    const std::pair<eucl::RingElem, eucl::RingElem>& b) const {
      if (eucl::RingElem::less(a.first, b.first)) return true;
      if (eucl::RingElem::less(b.first, a.first)) return false;
      return eucl::RingElem::less(a.second, b.second);
    }
  };
  mutable std::mutex mask_mutex_;
  mutable std::map<std::pair<eucl::RingElem, eucl::RingElem>,
                   std::vector<char>, RingElemPairLess>
      free_mask_memo_;

  friend class MultModule;
  friend class AddModule;
};

/// Multiplicative group of the tower as a Z-module.  The carrier excludes 0.
std::shared_ptr<const ModuleCtx> build_mult_module(
    std::shared_ptr<const gf::FieldCtx> field);

/// Additive group of the tower as an F_q[x]-module.
std::shared_ptr<const ModuleCtx> build_add_module(
    std::shared_ptr<const gf::FieldCtx> field);

}  // namespace freefield::modfree
