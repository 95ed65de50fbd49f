#pragma once

#include <stdexcept>
#include <string>

namespace lipgap {

enum class ErrorKind {
  Parse,
  Precondition,
  Guard,
  HorizonExhausted,
  DepthInsufficient,
  TableIncomplete,
  ChainMismatch,
  UnknownSheet,
  Internal,
};

const char* error_kind_name(ErrorKind kind);

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

inline void require(bool cond, const std::string& what) {
  if (!cond) throw Error(ErrorKind::Precondition, what);
}

// internal consistency check; a failure here is a bug, not bad input
inline void ensure(bool cond, const std::string& what) {
  if (!cond) throw Error(ErrorKind::Internal, what);
}

}  // namespace lipgap
