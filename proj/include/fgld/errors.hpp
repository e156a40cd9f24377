#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fgld {

enum class ErrorKind {
    InvalidConfig,
    NotPIntegral,
    PrecisionMismatch,
    VariableMismatch,
    NonzeroConstantTerm,
    NonUnitConstantTerm,
    NonUnitLinearCoefficient,
    ExponentOverflow,
    IntegralityFailure,
    NotPreparable,
    InexactDivision,
    ResidualMismatch,
    PrerequisiteVanishingFailed,
    NeitherSignHolds,
    IndexOutOfRange,
    WeightNotReduced,
    PrecisionExhausted,
    ParseError,
};

constexpr std::string_view to_string(ErrorKind k) {
    switch (k) {
        case ErrorKind::InvalidConfig: return "InvalidConfig";
        case ErrorKind::NotPIntegral: return "NotPIntegral";
        case ErrorKind::PrecisionMismatch: return "PrecisionMismatch";
        case ErrorKind::VariableMismatch: return "VariableMismatch";
        case ErrorKind::NonzeroConstantTerm: return "NonzeroConstantTerm";
        case ErrorKind::NonUnitConstantTerm: return "NonUnitConstantTerm";
        case ErrorKind::NonUnitLinearCoefficient: return "NonUnitLinearCoefficient";
        case ErrorKind::ExponentOverflow: return "ExponentOverflow";
        case ErrorKind::IntegralityFailure: return "IntegralityFailure";
        case ErrorKind::NotPreparable: return "NotPreparable";
        case ErrorKind::InexactDivision: return "InexactDivision";
        case ErrorKind::ResidualMismatch: return "ResidualMismatch";
        case ErrorKind::PrerequisiteVanishingFailed: return "PrerequisiteVanishingFailed";
        case ErrorKind::NeitherSignHolds: return "NeitherSignHolds";
        case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorKind::WeightNotReduced: return "WeightNotReduced";
        case ErrorKind::PrecisionExhausted: return "PrecisionExhausted";
        case ErrorKind::ParseError: return "ParseError";
    }
    return "Unknown";
}

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace fgld
