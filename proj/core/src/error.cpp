#include "zipfkit/error.hpp"

#include <fmt/format.h>

namespace zipfkit {

EncodingError::EncodingError(std::size_t byte_offset, const std::string& source)
    : InputError(fmt::format("{}: invalid UTF-8 at byte offset {}", source, byte_offset)),
      byte_offset_(byte_offset) {}

}  // namespace zipfkit
