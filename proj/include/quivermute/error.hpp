#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace qm {

enum class ErrorCode {
    NormalizationError,
    HomogeneityError,
    CompositionError,
    DuplicateId,
    UnknownReference,
    InvalidRelation,
    DegreeOverflow,
    CyclicQuiver,
    BlockMismatch,
    NotQuadratic,
    NotTranslationQuiver,
    UndefinedTranslate,
    WindowClipped,
    ConvexityRequired,
    NotMovable,
    WindowTooSmall,
    NotQuadraticTilde,
    NotReachable,
    InfiniteDimensional,
    LengthExceeded,
    NotSimpleProjective,
    ParseError,
    VersionConflict,
    Usage,
};

// Stable machine-readable name, e.g. "NOT_MOVABLE".
const char* code_name(ErrorCode c);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, std::vector<std::string> witness = {});

    ErrorCode code() const { return code_; }
    const char* code_str() const { return code_name(code_); }
    const std::vector<std::string>& witness() const { return witness_; }

private:
    ErrorCode code_;
    std::vector<std::string> witness_;
};

}  // namespace qm
