#include "exactlift/error.hpp"

namespace xl {

std::string_view error_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::DivisionByZero: return "DivisionByZero";
        case ErrorCode::DescriptorMismatch: return "DescriptorMismatch";
        case ErrorCode::ZeroDenominator: return "ZeroDenominator";
        case ErrorCode::PoleAtPoint: return "PoleAtPoint";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::NotInFundamentalRegion: return "NotInFundamentalRegion";
        case ErrorCode::DivisibleVector: return "DivisibleVector";
        case ErrorCode::UnknownVertex: return "UnknownVertex";
        case ErrorCode::ZeroVector: return "ZeroVector";
        case ErrorCode::QuiverMismatch: return "QuiverMismatch";
        case ErrorCode::ShapeMismatch: return "ShapeMismatch";
        case ErrorCode::WeightNotOrthogonal: return "WeightNotOrthogonal";
        case ErrorCode::BudgetExceeded: return "BudgetExceeded";
        case ErrorCode::NotFiniteField: return "NotFiniteField";
        case ErrorCode::NonAssociative: return "NonAssociative";
        case ErrorCode::NotABimodule: return "NotABimodule";
        case ErrorCode::NonCommutingOperators: return "NonCommutingOperators";
        case ErrorCode::DegreeTooLarge: return "DegreeTooLarge";
        case ErrorCode::CharacteristicTooSmall: return "CharacteristicTooSmall";
        case ErrorCode::NotAHomomorphism: return "NotAHomomorphism";
        case ErrorCode::NotSchur: return "NotSchur";
        case ErrorCode::DegreeMismatch: return "DegreeMismatch";
        case ErrorCode::DefectAtLowerArity: return "DefectAtLowerArity";
        case ErrorCode::NotCohomologyMultiplicative: return "NotCohomologyMultiplicative";
        case ErrorCode::ObstructionNonzero: return "ObstructionNonzero";
        case ErrorCode::NoChainLevelLift: return "NoChainLevelLift";
        case ErrorCode::MissingUnit: return "MissingUnit";
        case ErrorCode::ArityBudgetExceeded: return "ArityBudgetExceeded";
        case ErrorCode::NotADerivation: return "NotADerivation";
        case ErrorCode::Internal: return "Internal";
    }
    return "Unknown";
}

}  // namespace xl
