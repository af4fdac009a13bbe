#include "infopt/error.hpp"

namespace infopt {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::OutOfRange: return "OutOfRange";
        case ErrorKind::StepCountTooSmall: return "StepCountTooSmall";
        case ErrorKind::DegenerateStart: return "DegenerateStart";
        case ErrorKind::GridTooCoarse: return "GridTooCoarse";
        case ErrorKind::UnstableConfiguration: return "UnstableConfiguration";
        case ErrorKind::OutOfDomain: return "OutOfDomain";
        case ErrorKind::EmptySample: return "EmptySample";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::ValidationError: return "ValidationError";
    }
    return "Unknown";
}

}  // namespace infopt
