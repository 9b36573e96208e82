#pragma once

#include <stdexcept>
#include <string>

namespace banach {

enum class ErrorKind {
  InvalidSpec,      // malformed group/set/measure/window description
  InvalidArgument,  // argument out of the operation's domain
  Domain,           // element or set used with the wrong group
  Unsupported,      // operation not defined for this variant
  Resource,         // brute-force cap exceeded
  Precondition,     // a hypothesis of a construction fails
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace banach
