#pragma once

#include <stdexcept>
#include <string>

namespace fcmp {

enum class ErrorKind {
  InvalidArgument,
  Domain,
  Range,
  Spec,
  EmptyInput,
  Schema,
  Parse,
  Degenerate,
  Optimization,
  Overflow,
  Singular,
  Precondition,
  Io
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

inline void require(bool ok, ErrorKind kind, const std::string& message) {
  if (!ok) fail(kind, message);
}

}  // namespace fcmp
