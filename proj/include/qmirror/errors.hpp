#pragma once

#include <stdexcept>
#include <string>

namespace qmirror {

enum class ErrorKind {
    InvalidArgument,
    InvalidQuiver,
    NotRealizable,
    NumericalFailure,
    PoleEncountered,
    EmptyResult,
    ChainInconsistent,
    Degenerate,
    WronskianMismatch,
    DDInconsistent,
    IllConditioned,
    CoordinateCollision,
    DegenerateZero,
    Unsupported,
    NotPartialFlagOrder,
    CalibrationFailed,
    InvalidPattern,
    MapShapeError,
    ReductionInconsistent,
};

const char* error_name(ErrorKind k);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg)
        : std::runtime_error(std::string(error_name(kind)) + ": " + msg), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind k, const std::string& msg) { throw Error(k, msg); }

}  // namespace qmirror
