#pragma once

#include <stdexcept>
#include <string>

namespace dca {

enum class ErrorKind {
  invalid_params,
  no_regime,
  precondition_violated,
  both_smooth,
  both_nonsmooth,
  denominator_zero,
  boundary_disagreement,
  subproblem_unbounded,
  missing_fstar,
  infeasible_construction,
  bad_input,
};

const char* to_string(ErrorKind kind);

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace dca
