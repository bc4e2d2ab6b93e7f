#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace freefield {

/// Raised when a computation that the theory guarantees must hold (an exact
/// identity, a characteristic-function value, agreement between two
/// independent routes) fails.  Always indicates a defect in the library or
/// its inputs' assumed structure, never ordinary user error.  Carries the
/// decomposition that exposes the mismatch so the failure is diagnosable.
class IdentityViolation : public std::runtime_error {
 public:
  IdentityViolation(std::string check, std::string detail)
      : std::runtime_error(check + ": " + detail),
        check_(std::move(check)),
        detail_(std::move(detail)) {}

  const std::string& check() const noexcept { return check_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::string check_;
  std::string detail_;
};

/// Raised when a requested construction would enumerate more elements than
/// the configured cap allows.
class CapExceeded : public std::runtime_error {
 public:
  CapExceeded(uint64_t requested, uint64_t cap)
      : std::runtime_error("enumeration cap exceeded: need " +
                           std::to_string(requested) + " elements, cap is " +
                           std::to_string(cap)),
        requested_(requested),
        cap_(cap) {}

  uint64_t requested() const noexcept { return requested_; }
  uint64_t cap() const noexcept { return cap_; }

 private:
  uint64_t requested_;
  uint64_t cap_;
};

/// Text-input failure carrying the byte offset of the offending character.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, size_t offset)
      : std::runtime_error(msg + " (at byte " + std::to_string(offset) + ")"),
        offset_(offset) {}

  size_t offset() const noexcept { return offset_; }

 private:
  size_t offset_;
};

}  // namespace freefield
