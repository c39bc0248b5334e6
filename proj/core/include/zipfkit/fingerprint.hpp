#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace zipfkit {

// 64-bit FNV-1a over a canonical configuration string. Tables and
// distributions carry one so that merges across incompatible preprocessing
// are detected.
class Fingerprint {
 public:
  constexpr Fingerprint() = default;
  constexpr explicit Fingerprint(std::uint64_t value) : value_(value) {}

  static Fingerprint of(std::string_view canonical);

  constexpr std::uint64_t value() const { return value_; }
  std::string hex() const;
  static Fingerprint from_hex(std::string_view hex);

  // Combines this fingerprint with another component, order-sensitive.
  Fingerprint combine(std::string_view component) const;

  friend constexpr bool operator==(Fingerprint, Fingerprint) = default;

 private:
  std::uint64_t value_ = 0;
};

}  // namespace zipfkit
