#pragma once

#include <stdexcept>
#include <string>

namespace hcwave {

enum class ErrorKind {
  invalid_argument,
  config,
  numerical,
  io,
};

/// Single exception type for the library; the kind maps onto C status codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string &what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string &what) {
  throw Error(kind, what);
}

inline void require(bool condition, const std::string &what) {
  if (!condition) fail(ErrorKind::invalid_argument, what);
}

/// Warnings go to stderr unless silenced (tests silence them).
void warn(const std::string &message);
void set_warnings_enabled(bool enabled);

}  // namespace hcwave
