#include "gp/errors.hpp"

namespace gp {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::PoleHit: return "PoleHit";
        case ErrorCode::PoleTooClose: return "PoleTooClose";
        case ErrorCode::NotNormalizable: return "NotNormalizable";
        case ErrorCode::QuadratureDiverged: return "QuadratureDiverged";
        case ErrorCode::InvalidModel: return "InvalidModel";
        case ErrorCode::InvalidEvent: return "InvalidEvent";
        case ErrorCode::NumericallyIndefinite: return "NumericallyIndefinite";
        case ErrorCode::WindowTooLarge: return "WindowTooLarge";
        case ErrorCode::WrongFactorKind: return "WrongFactorKind";
        case ErrorCode::OverlapError: return "OverlapError";
        case ErrorCode::ConditioningOnNullEvent: return "ConditioningOnNullEvent";
        case ErrorCode::InterlacingViolation: return "InterlacingViolation";
        case ErrorCode::NotPathRegime: return "NotPathRegime";
        case ErrorCode::ModeUnsupported: return "ModeUnsupported";
        case ErrorCode::BoxTooLarge: return "BoxTooLarge";
        case ErrorCode::EmptyEnsemble: return "EmptyEnsemble";
        case ErrorCode::NullConditioningEvent: return "NullConditioningEvent";
        case ErrorCode::RangeTooWide: return "RangeTooWide";
        case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

}  // namespace gp
