#pragma once

#include <stdexcept>
#include <string>

namespace classinv {

enum class ErrorKind {
  BadInput,      // caller violated a precondition
  Verification,  // an exact or numeric self-check failed
  Precision,     // ran out of precision or retries
  Recognition,   // linear recognition / integer recognition failed
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, const std::string& what) {
  if (!cond) fail(ErrorKind::BadInput, what);
}

}  // namespace classinv
