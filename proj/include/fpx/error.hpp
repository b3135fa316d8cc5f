#pragma once

#include <stdexcept>
#include <string>

namespace fpx {

// Error kinds map onto CLI exit codes: usage errors exit 2, exhausted
// search budgets exit 3, failed verification checks exit 1.
enum class ErrorKind { usage, budget, verify, internal };

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

inline Error usage_error(const std::string& what) { return Error(ErrorKind::usage, what); }
inline Error budget_error(const std::string& what) { return Error(ErrorKind::budget, what); }
inline Error verify_error(const std::string& what) { return Error(ErrorKind::verify, what); }
inline Error internal_error(const std::string& what) { return Error(ErrorKind::internal, what); }

}  // namespace fpx
