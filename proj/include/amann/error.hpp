#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace amann {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller supplied an out-of-range or inconsistent parameter.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Input data is unusable (zero-norm vector, mismatched collection, ...).
class DataError : public Error {
 public:
  using Error::Error;
};

/// A file does not follow its declared binary or text layout.
class FormatError : public DataError {
 public:
  FormatError(const std::string& what, std::uint64_t offset)
      : DataError(what + " (at byte offset " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::uint64_t offset() const { return offset_; }

 private:
  std::uint64_t offset_;
};

}  // namespace amann
