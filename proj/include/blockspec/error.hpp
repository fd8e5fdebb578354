#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace blockspec {

/// Coarse failure category; the CLI maps each to a distinct exit code.
enum class ErrorKind {
  InvalidArgument,
  Parse,
  Numerical,
  Io,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace blockspec
