#pragma once

#include <stdexcept>
#include <string>

namespace featbench {

// Error categories map onto the CLI exit codes: validation errors exit 1,
// I/O and runtime errors exit 2, internal invariant violations exit 3.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& msg) : Error(msg) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& msg) : Error(msg) {}
};

class InternalError : public Error {
 public:
  explicit InternalError(const std::string& msg) : Error(msg) {}
};

inline void internal_check(bool condition, const std::string& msg) {
  if (!condition) throw InternalError(msg);
}

}  // namespace featbench
