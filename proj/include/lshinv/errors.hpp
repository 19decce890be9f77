#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lshinv {

/// Arguments or parameters that violate an operation's contract.
struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Malformed or truncated on-disk data; carries the byte offset at which
/// parsing failed.
struct FormatError : std::runtime_error {
  FormatError(const std::string& msg, std::size_t offset)
      : std::runtime_error(msg + " (byte offset " + std::to_string(offset) + ")"),
        byte_offset(offset) {}

  std::size_t byte_offset;
};

}  // namespace lshinv
