#pragma once

#include <stdexcept>
#include <string>

namespace modcount {

enum class ErrorCode {
  invalid_argument,
  not_coprime,
  budget_exceeded,
  overflow,
};

/// Every library failure is reported as an `Error` carrying one of the codes
/// above; the C API maps them onto its status enum.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool ok, const std::string& what) {
  if (!ok) fail(ErrorCode::invalid_argument, what);
}

}  // namespace modcount
