#include "zipfkit/fingerprint.hpp"

#include <charconv>

#include <fmt/format.h>

#include "zipfkit/error.hpp"

namespace zipfkit {
namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

std::uint64_t fnv1a(std::uint64_t h, std::string_view bytes) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

}  // namespace

Fingerprint Fingerprint::of(std::string_view canonical) {
  return Fingerprint(fnv1a(kFnvOffset, canonical));
}

Fingerprint Fingerprint::combine(std::string_view component) const {
  // Separator byte keeps ("ab","c") distinct from ("a","bc").
  std::uint64_t h = fnv1a(value_ == 0 ? kFnvOffset : value_, "\x1f");
  return Fingerprint(fnv1a(h, component));
}

std::string Fingerprint::hex() const { return fmt::format("{:016x}", value_); }

Fingerprint Fingerprint::from_hex(std::string_view hex) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(hex.data(), hex.data() + hex.size(), v, 16);
  if (ec != std::errc{} || ptr != hex.data() + hex.size() || hex.empty()) {
    throw InputError(fmt::format("malformed fingerprint '{}'", hex));
  }
  return Fingerprint(v);
}

}  // namespace zipfkit
