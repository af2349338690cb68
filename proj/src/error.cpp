#include "dwell/error.hpp"

namespace dwell {

std::string_view to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NotDoubleWell: return "NotDoubleWell";
    case ErrorCode::EmptyEnsemble: return "EmptyEnsemble";
    case ErrorCode::DegenerateFit: return "DegenerateFit";
    case ErrorCode::DegenerateGap: return "DegenerateGap";
    case ErrorCode::SingularTemperature: return "SingularTemperature";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::TruncationTooSmall: return "TruncationTooSmall";
    case ErrorCode::TruncationLeak: return "TruncationLeak";
    case ErrorCode::NotPositive: return "NotPositive";
    case ErrorCode::BlowUp: return "BlowUp";
    case ErrorCode::BoundaryLeak: return "BoundaryLeak";
    case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

} // namespace dwell
