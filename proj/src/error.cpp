#include "pulseforge/error.hpp"

namespace pulseforge {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidScenario: return "invalid scenario";
        case ErrorKind::InvalidArgument: return "invalid argument";
        case ErrorKind::DegeneratePulse: return "degenerate pulse";
        case ErrorKind::UndefinedSidelobes: return "undefined sidelobes";
        case ErrorKind::Codec: return "codec error";
        case ErrorKind::InvalidSeed: return "invalid seed";
        case ErrorKind::InvalidConfig: return "invalid config";
        case ErrorKind::InsufficientData: return "insufficient data";
        case ErrorKind::DegenerateTarget: return "degenerate target";
        case ErrorKind::ContractViolation: return "contract violation";
        case ErrorKind::Shape: return "shape error";
        case ErrorKind::Fitness: return "fitness failure";
        case ErrorKind::Io: return "i/o failure";
    }
    return "error";
}

}  // namespace pulseforge
