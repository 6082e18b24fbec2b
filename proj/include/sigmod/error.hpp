#pragma once

#include <stdexcept>
#include <string>

namespace sigmod {

enum class ErrorCode {
    DivisionByZero,
    PrecisionExhausted,
    AmbiguousValuation,
    NumericalFailure,
    WindowOverflow,
    NotAUnit,
    MembershipViolated,
    SingularFrobenius,
    SingularInput,
    NotFactorable,
    NotConverged,
    NonUnitPivot,
    NotHorizontal,
    PreconditionFailed,
    CocycleViolated,
    ParseError,
    InvalidArgument,
};

const char* error_name(ErrorCode code);

/// Every library failure is reported through this type; the code names the
/// failure class and the message carries the specifics (entry, witness, ...).
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& detail)
        : std::runtime_error(std::string(error_name(code)) + ": " + detail), code_(code), detail_(detail) {}

    ErrorCode code() const noexcept { return code_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorCode code_;
    std::string detail_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& detail) { throw Error(code, detail); }

}  // namespace sigmod
