#include "banach/error.hpp"

namespace banach {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidSpec: return "invalid-spec";
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::Domain: return "domain-error";
    case ErrorKind::Unsupported: return "unsupported-operation";
    case ErrorKind::Resource: return "resource-error";
    case ErrorKind::Precondition: return "precondition-error";
  }
  return "error";
}

}  // namespace banach
