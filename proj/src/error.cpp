#include "fcmp/error.hpp"

namespace fcmp {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid argument";
    case ErrorKind::Domain: return "domain error";
    case ErrorKind::Range: return "range error";
    case ErrorKind::Spec: return "spec error";
    case ErrorKind::EmptyInput: return "empty input";
    case ErrorKind::Schema: return "schema error";
    case ErrorKind::Parse: return "parse error";
    case ErrorKind::Degenerate: return "degenerate variance";
    case ErrorKind::Optimization: return "optimization failure";
    case ErrorKind::Overflow: return "overflow";
    case ErrorKind::Singular: return "singular design";
    case ErrorKind::Precondition: return "precondition violated";
    case ErrorKind::Io: return "i/o error";
  }
  return "error";
}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace fcmp
