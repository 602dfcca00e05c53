#include "cline/errors.hpp"

namespace cline {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::validation: return "Validation";
    case Errc::no_sign_change: return "NoSignChange";
    case Errc::non_alternating: return "NonAlternating";
    case Errc::zero_negative_part: return "ZeroNegativePart";
    case Errc::quadrature_failure: return "QuadratureFailure";
    case Errc::domain_error: return "DomainError";
    case Errc::blow_up: return "BlowUp";
    case Errc::step_underflow: return "StepUnderflow";
    case Errc::coverage_error: return "CoverageError";
    case Errc::g0_required: return "G0Required";
    case Errc::g1_violation: return "G1Violation";
    case Errc::no_admissible_epsilon: return "NoAdmissibleEpsilon";
    case Errc::precondition_violated: return "PreconditionViolated";
    case Errc::diverged: return "Diverged";
    case Errc::stuck_at_boundary: return "StuckAtBoundary";
    case Errc::unclassifiable: return "Unclassifiable";
    case Errc::box_empty: return "BoxEmpty";
    case Errc::continuation_lost: return "ContinuationLost";
    case Errc::overflow: return "Overflow";
    case Errc::not_converged: return "NotConverged";
    case Errc::io_error: return "IoError";
  }
  return "Unknown";
}

}  // namespace cline
