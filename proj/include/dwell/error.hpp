#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dwell {

enum class ErrorCode {
    InvalidArgument,
    NotDoubleWell,
    EmptyEnsemble,
    DegenerateFit,
    DegenerateGap,
    SingularTemperature,
    ConvergenceFailure,
    NoConvergence,
    TruncationTooSmall,
    TruncationLeak,
    NotPositive,
    BlowUp,
    BoundaryLeak,
    Io,
};

std::string_view to_string(ErrorCode code);

// Configuration errors are caused by the caller's parameters; everything
// else is a numerical failure discovered while computing.
constexpr bool is_config_error(ErrorCode code)
{
    switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::NotDoubleWell:
    case ErrorCode::EmptyEnsemble:
    case ErrorCode::SingularTemperature:
    case ErrorCode::TruncationTooSmall:
    case ErrorCode::Io:
        return true;
    default:
        return false;
    }
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what)
        , code_(code)
    {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline void require(bool cond, ErrorCode code, const std::string& what)
{
    if (!cond) throw Error(code, what);
}

} // namespace dwell
