#pragma once

#include <stdexcept>
#include <string>

namespace cline {

// Failure codes surfaced through the CLI with module-qualified messages.
// `validation` maps to exit code 1, everything else to exit code 2.
enum class Errc {
  validation,
  no_sign_change,
  non_alternating,
  zero_negative_part,
  quadrature_failure,
  domain_error,
  blow_up,
  step_underflow,
  coverage_error,
  g0_required,
  g1_violation,
  no_admissible_epsilon,
  precondition_violated,
  diverged,
  stuck_at_boundary,
  unclassifiable,
  box_empty,
  continuation_lost,
  overflow,
  not_converged,
  io_error,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}
  Errc code() const { return code_; }
  int exit_code() const { return code_ == Errc::validation ? 1 : 2; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) { throw Error(code, msg); }

}  // namespace cline
