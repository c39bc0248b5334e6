#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace zipfkit {

// Error classes map one-to-one onto CLI exit codes (see tools/zipfkit).
enum class ErrorKind {
  kInput,       // unreadable file, malformed input data
  kEmptyInput,  // input that produced no tokens
  kConfig,      // invalid options, manifests, incompatible merges
  kNumeric,     // fit windows and other numerical preconditions
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class InputError : public Error {
 public:
  explicit InputError(const std::string& what) : Error(ErrorKind::kInput, what) {}

 protected:
  InputError(ErrorKind kind, const std::string& what) : Error(kind, what) {}
};

// Raised for ill-formed UTF-8; carries the byte offset of the first bad sequence.
class EncodingError : public InputError {
 public:
  EncodingError(std::size_t byte_offset, const std::string& source);
  std::size_t byte_offset() const noexcept { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

class EmptyInputError : public InputError {
 public:
  explicit EmptyInputError(const std::string& what) : InputError(ErrorKind::kEmptyInput, what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorKind::kConfig, what) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what) : Error(ErrorKind::kNumeric, what) {}
};

}  // namespace zipfkit
