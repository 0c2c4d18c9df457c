#pragma once

#include <stdexcept>
#include <string>

namespace linamp {

// Base for all toolkit errors. code() is the stable identifier used in
// structured error output; what() carries the human-readable detail.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
    virtual const char* code() const noexcept { return "Error"; }
};

#define LINAMP_DEFINE_ERROR(NAME)                                    \
    class NAME : public Error {                                      \
    public:                                                          \
        explicit NAME(const std::string& msg) : Error(msg) {}        \
        const char* code() const noexcept override { return #NAME; } \
    }

LINAMP_DEFINE_ERROR(DomainError);        // invalid parameter (nbar < 0, fock n >= dim, ...)
LINAMP_DEFINE_ERROR(DimensionMismatch);  // operands live on incompatible spaces
LINAMP_DEFINE_ERROR(TruncationError);    // state no longer fits the chosen Fock cutoff
LINAMP_DEFINE_ERROR(ToleranceError);     // step controller failed to meet tolerances
LINAMP_DEFINE_ERROR(InvariantViolation); // constructed state fails hermiticity/trace/PSD
LINAMP_DEFINE_ERROR(InconsistentGain);   // amplitude records disagree on the gain
LINAMP_DEFINE_ERROR(NotPhasePreserving); // estimated gain has a significant phase
LINAMP_DEFINE_ERROR(NoAmplitudeRecord);  // gain estimation needs <a>_in != 0 somewhere
LINAMP_DEFINE_ERROR(DegenerateInput);    // all quadrature means vanish at t=0
LINAMP_DEFINE_ERROR(GuardExceeded);      // trajectory exceeded the jump-count guard
LINAMP_DEFINE_ERROR(Unsupported);        // no closed form exists for this family
LINAMP_DEFINE_ERROR(ConfigError);        // malformed run configuration

#undef LINAMP_DEFINE_ERROR

} // namespace linamp
