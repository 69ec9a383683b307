#ifndef LPFIELD_ERRORS_HPP
#define LPFIELD_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace lpfield {

/// Violated precondition or malformed input. Maps to CLI exit code 1.
class ContractError : public std::invalid_argument {
public:
  explicit ContractError(const std::string& what) : std::invalid_argument(what) {}
};

/// Numerical diagnostic failure (e.g. a non-convergent schedule). Carries a
/// human-readable trace of the offending quantities. Maps to CLI exit code 2.
class DiagnosticError : public std::runtime_error {
public:
  DiagnosticError(const std::string& what, std::string trace)
      : std::runtime_error(what), trace_(std::move(trace)) {}
  const std::string& trace() const { return trace_; }

private:
  std::string trace_;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw ContractError(msg);
}

}  // namespace lpfield

#endif
