#pragma once

#include <cstdint>
#include <memory>
#include <vector>

namespace freefield {

/// A finite field F_{p^k}: either a prime field Z/p or an extension of a
/// smaller FqCtx by a monic irreducible modulus.  Towers of arbitrary height
/// are supported; in this library at most F_p < F_q < F_{q^m} occurs.
///
/// Elements are dense indices in [0, q).  An extension element
/// c_0 + c_1 y + ... + c_{k-1} y^{k-1} (digits c_i in the base field) packs
/// as idx(c_0) + idx(c_1)*base_q + ... , i.e. the constant digit varies
/// fastest.  Consequently index 0 is zero and index 1 is one at every level
/// of a tower, ascending index order is the canonical enumeration order, and
/// an integer n in [0, p) denotes the prime-subfield element n at any level.
class FqCtx : public std::enable_shared_from_this<FqCtx> {
 public:
  static std::shared_ptr<const FqCtx> prime(uint32_t p);

  /// `modulus` holds coefficients over `base`, constant term first, monic,
  /// degree >= 1.  Irreducibility is the caller's responsibility (the field
  /// tower builder verifies it); basic shape is checked here.
  static std::shared_ptr<const FqCtx> extension(
      std::shared_ptr<const FqCtx> base, std::vector<uint64_t> modulus);

  uint32_t p() const { return p_; }
  uint64_t q() const { return q_; }
  /// Degree over the immediate base field (1 for a prime field).
  uint32_t degree() const { return degree_; }
  /// Degree over the prime field.
  uint32_t abs_degree() const { return abs_degree_; }
  bool is_prime_field() const { return base_ == nullptr; }
  const std::shared_ptr<const FqCtx>& base() const { return base_; }
  const std::vector<uint64_t>& modulus() const { return modulus_; }

  uint64_t add(uint64_t a, uint64_t b) const;
  uint64_t sub(uint64_t a, uint64_t b) const;
  uint64_t neg(uint64_t a) const;
  uint64_t mul(uint64_t a, uint64_t b) const;
  uint64_t inv(uint64_t a) const;  // a != 0
  uint64_t pow(uint64_t a, uint64_t e) const;
  /// Multiply by a base-field scalar (digitwise).
  uint64_t scale(uint64_t base_c, uint64_t a) const;

  /// n mod p embedded through the prime subfield.
  uint64_t from_int(long long n) const;

  /// Digits over the immediate base, constant first, length degree().
  std::vector<uint64_t> unpack(uint64_t a) const;
  uint64_t pack(const std::vector<uint64_t>& digits) const;

  /// Structural equality of the whole tower (not pointer identity).
  bool same_field(const FqCtx& other) const;

 private:
  FqCtx() = default;

  uint64_t mul_generic(uint64_t a, uint64_t b) const;
  void build_tables();

  uint32_t p_ = 0;
  uint64_t q_ = 0;
  uint32_t degree_ = 1;
  uint32_t abs_degree_ = 1;
  std::shared_ptr<const FqCtx> base_;   // null for prime fields
  std::vector<uint64_t> modulus_;       // empty for prime fields

  // Dense lookup tables for small fields; empty means "compute directly".
  std::vector<uint32_t> mul_table_;
  std::vector<uint32_t> inv_table_;
};

}  // namespace freefield
