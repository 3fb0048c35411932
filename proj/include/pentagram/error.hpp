#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pentagram {

enum class ErrorKind {
    InvalidInput,
    DegenerateLine,
    DegenerateIntersection,
    DegenerateDiagonal,
    MapUndefined,
    MapUndefinedAtStep,
    IndivisibilityViolated,
    DegenerateChain,
    InconsistentLift,
    NoPreimage,
    UnsupportedN,
    DegenerateLambda,
    ConstraintViolated,
    SupportMismatch,
    ZeroZ,
    NonGeneric,
    Degenerate,
    NearBranchPoint,
    SheetTrackingFailed,
    DivisionByZero,
    GenerationFailed,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

    // Set only for MapUndefinedAtStep.
    int step() const noexcept { return step_; }
    Error& at_step(int s) {
        step_ = s;
        return *this;
    }

private:
    ErrorKind kind_;
    int step_ = -1;
};

// True for the error kinds the CLI maps to the "degeneracy" exit code.
bool is_degeneracy(ErrorKind kind);

}  // namespace pentagram
