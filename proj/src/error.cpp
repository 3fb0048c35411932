#include "pentagram/error.hpp"

namespace pentagram {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidInput: return "InvalidInput";
        case ErrorKind::DegenerateLine: return "DegenerateLine";
        case ErrorKind::DegenerateIntersection: return "DegenerateIntersection";
        case ErrorKind::DegenerateDiagonal: return "DegenerateDiagonal";
        case ErrorKind::MapUndefined: return "MapUndefined";
        case ErrorKind::MapUndefinedAtStep: return "MapUndefinedAtStep";
        case ErrorKind::IndivisibilityViolated: return "IndivisibilityViolated";
        case ErrorKind::DegenerateChain: return "DegenerateChain";
        case ErrorKind::InconsistentLift: return "InconsistentLift";
        case ErrorKind::NoPreimage: return "NoPreimage";
        case ErrorKind::UnsupportedN: return "UnsupportedN";
        case ErrorKind::DegenerateLambda: return "DegenerateLambda";
        case ErrorKind::ConstraintViolated: return "ConstraintViolated";
        case ErrorKind::SupportMismatch: return "SupportMismatch";
        case ErrorKind::ZeroZ: return "ZeroZ";
        case ErrorKind::NonGeneric: return "NonGeneric";
        case ErrorKind::Degenerate: return "Degenerate";
        case ErrorKind::NearBranchPoint: return "NearBranchPoint";
        case ErrorKind::SheetTrackingFailed: return "SheetTrackingFailed";
        case ErrorKind::DivisionByZero: return "DivisionByZero";
        case ErrorKind::GenerationFailed: return "GenerationFailed";
    }
    return "Unknown";
}

bool is_degeneracy(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::MapUndefined:
        case ErrorKind::MapUndefinedAtStep:
        case ErrorKind::NonGeneric:
        case ErrorKind::DegenerateChain:
        case ErrorKind::DegenerateDiagonal:
        case ErrorKind::DegenerateLambda:
        case ErrorKind::Degenerate:
        case ErrorKind::NearBranchPoint:
        case ErrorKind::SheetTrackingFailed:
            return true;
        default:
            return false;
    }
}

}  // namespace pentagram
