#pragma once

#include <stdexcept>
#include <string>

namespace gp {

enum class ErrorCode {
    PoleHit,
    PoleTooClose,
    NotNormalizable,
    QuadratureDiverged,
    InvalidModel,
    InvalidEvent,
    NumericallyIndefinite,
    WindowTooLarge,
    WrongFactorKind,
    OverlapError,
    ConditioningOnNullEvent,
    InterlacingViolation,
    NotPathRegime,
    ModeUnsupported,
    BoxTooLarge,
    EmptyEnsemble,
    NullConditioningEvent,
    RangeTooWide,
    ParseError,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace gp
