#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace touchauth {

enum class ErrorCode {
    MissingColumn,
    BadValue,
    EmptyInput,
    DegenerateStroke,
    EmptySamples,
    TooFewRows,
    ClassTooSmall,
    LengthMismatch,
    DimensionMismatch,
    SingularCovariance,
    DegenerateClass,
    EmptyNode,
    EmptyScores,
    UnknownLabel,
    InvalidArgument,
    Io,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Single exception type for the library; `code()` distinguishes the failure class.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace touchauth
