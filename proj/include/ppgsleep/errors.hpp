#pragma once

#include <stdexcept>
#include <string>

namespace ppgsleep {

enum class ErrorCode {
    InsufficientData = 2,
    InvalidSeries = 3,
    DecodeError = 4,
    ParseError = 5,
    SchemaError = 6,
    InvalidParam = 7,
    InvalidGrid = 8,
    InvalidGain = 9,
    NonFiniteInput = 10,
    InvalidInput = 11,
    ZeroReference = 12,
    BoundaryIndex = 13,
    IoError = 14,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const { return code_; }
    int exit_code() const { return static_cast<int>(code_); }

private:
    ErrorCode code_;
};

} // namespace ppgsleep
