#include "quivermute/error.hpp"

namespace qm {

const char* code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::NormalizationError: return "NORMALIZATION_ERROR";
        case ErrorCode::HomogeneityError: return "HOMOGENEITY_ERROR";
        case ErrorCode::CompositionError: return "COMPOSITION_ERROR";
        case ErrorCode::DuplicateId: return "DUPLICATE_ID";
        case ErrorCode::UnknownReference: return "UNKNOWN_REFERENCE";
        case ErrorCode::InvalidRelation: return "INVALID_RELATION";
        case ErrorCode::DegreeOverflow: return "DEGREE_OVERFLOW";
        case ErrorCode::CyclicQuiver: return "CYCLIC_QUIVER";
        case ErrorCode::BlockMismatch: return "BLOCK_MISMATCH";
        case ErrorCode::NotQuadratic: return "NOT_QUADRATIC";
        case ErrorCode::NotTranslationQuiver: return "NOT_TRANSLATION_QUIVER";
        case ErrorCode::UndefinedTranslate: return "UNDEFINED_TRANSLATE";
        case ErrorCode::WindowClipped: return "WINDOW_CLIPPED";
        case ErrorCode::ConvexityRequired: return "CONVEXITY_REQUIRED";
        case ErrorCode::NotMovable: return "NOT_MOVABLE";
        case ErrorCode::WindowTooSmall: return "WINDOW_TOO_SMALL";
        case ErrorCode::NotQuadraticTilde: return "NOT_QUADRATIC_TILDE";
        case ErrorCode::NotReachable: return "NOT_REACHABLE";
        case ErrorCode::InfiniteDimensional: return "INFINITE_DIMENSIONAL";
        case ErrorCode::LengthExceeded: return "LENGTH_EXCEEDED";
        case ErrorCode::NotSimpleProjective: return "NOT_SIMPLE_PROJECTIVE";
        case ErrorCode::ParseError: return "PARSE_ERROR";
        case ErrorCode::VersionConflict: return "VERSION_CONFLICT";
        case ErrorCode::Usage: return "USAGE";
    }
    return "UNKNOWN";
}

Error::Error(ErrorCode code, const std::string& message, std::vector<std::string> witness)
    : std::runtime_error(message), code_(code), witness_(std::move(witness)) {}

}  // namespace qm
