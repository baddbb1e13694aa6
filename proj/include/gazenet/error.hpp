#pragma once

#include <stdexcept>
#include <string>

namespace gazenet {

// Bad input, configuration or contract violation. Maps to exit code 1.
class ValidationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Filesystem or codec failure. Maps to exit code 2.
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

[[noreturn]] inline void fail(const std::string& what) { throw ValidationError(what); }

inline void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

}  // namespace gazenet
