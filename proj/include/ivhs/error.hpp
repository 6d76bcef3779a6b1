#ifndef IVHS_ERROR_HPP
#define IVHS_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace ivhs {

enum class ErrorKind {
    CompositeModulus,
    Unsupported,
    AmbientMismatch,
    FieldMismatch,
    DegreeMismatch,
    ZeroPoint,
    NonTransverse,
    CommonComponent,
    SplittingTooLarge,
    TooManyNodes,
    PrimeTooSmall,
    GenerationExhausted,
    NotSingular,
    NotStabilized,
    LedgerViolation,
    SigmaNotAdjoint,
    ExchangeStalled,
    EmptySystem,
    NotSmooth,
    Parse,
};

inline std::string_view to_string(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::CompositeModulus: return "CompositeModulus";
    case ErrorKind::Unsupported: return "Unsupported";
    case ErrorKind::AmbientMismatch: return "AmbientMismatch";
    case ErrorKind::FieldMismatch: return "FieldMismatch";
    case ErrorKind::DegreeMismatch: return "DegreeMismatch";
    case ErrorKind::ZeroPoint: return "ZeroPoint";
    case ErrorKind::NonTransverse: return "NonTransverse";
    case ErrorKind::CommonComponent: return "CommonComponent";
    case ErrorKind::SplittingTooLarge: return "SplittingTooLarge";
    case ErrorKind::TooManyNodes: return "TooManyNodes";
    case ErrorKind::PrimeTooSmall: return "PrimeTooSmall";
    case ErrorKind::GenerationExhausted: return "GenerationExhausted";
    case ErrorKind::NotSingular: return "NotSingular";
    case ErrorKind::NotStabilized: return "NotStabilized";
    case ErrorKind::LedgerViolation: return "LedgerViolation";
    case ErrorKind::SigmaNotAdjoint: return "SigmaNotAdjoint";
    case ErrorKind::ExchangeStalled: return "ExchangeStalled";
    case ErrorKind::EmptySystem: return "EmptySystem";
    case ErrorKind::NotSmooth: return "NotSmooth";
    case ErrorKind::Parse: return "Parse";
    }
    return "Unknown";
}

// All library failures are reported through this type; kind() is the
// machine-readable part, what() carries the detail.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& detail)
        : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind)
    {
    }

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace ivhs

#endif
