#pragma once

#include <stdexcept>
#include <string>

namespace censync {

enum class ErrorKind {
  InvalidArgument,  // bad parameters, violated preconditions
  Io,               // file access / format problems
  Compute,          // caps exceeded, non-convergence
};

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail_invalid(const std::string& msg) {
  throw Error(ErrorKind::InvalidArgument, msg);
}
[[noreturn]] inline void fail_io(const std::string& msg) {
  throw Error(ErrorKind::Io, msg);
}
[[noreturn]] inline void fail_compute(const std::string& msg) {
  throw Error(ErrorKind::Compute, msg);
}

}  // namespace censync
