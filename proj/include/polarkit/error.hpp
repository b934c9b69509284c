#pragma once

#include <stdexcept>
#include <string>

namespace polarkit {

enum class ErrorKind {
  usage,         // caller passed inconsistent or unsupported arguments
  domain,        // mathematically invalid input (reducible modulus, singular map, ...)
  resource,      // a size cap or search budget was exceeded
  internal,      // an invariant of the construction failed
  verification,  // a certificate or claimed object did not verify
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) fail(kind, what);
}

}  // namespace polarkit
