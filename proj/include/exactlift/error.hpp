#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace xl {

enum class ErrorCode {
    DivisionByZero,
    DescriptorMismatch,
    ZeroDenominator,
    PoleAtPoint,
    ParseError,
    InvalidArgument,
    DimensionMismatch,
    NotInFundamentalRegion,
    DivisibleVector,
    UnknownVertex,
    ZeroVector,
    QuiverMismatch,
    ShapeMismatch,
    WeightNotOrthogonal,
    BudgetExceeded,
    NotFiniteField,
    NonAssociative,
    NotABimodule,
    NonCommutingOperators,
    DegreeTooLarge,
    CharacteristicTooSmall,
    NotAHomomorphism,
    NotSchur,
    DegreeMismatch,
    DefectAtLowerArity,
    NotCohomologyMultiplicative,
    ObstructionNonzero,
    NoChainLevelLift,
    MissingUnit,
    ArityBudgetExceeded,
    NotADerivation,
    Internal,
};

std::string_view error_name(ErrorCode c);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

// Parse failures carry a 1-based position so file loaders can point at it.
class ParseError : public Error {
public:
    ParseError(const std::string& what, int line, int column)
        : Error(ErrorCode::ParseError, what + " (line " + std::to_string(line) + ", column " +
                                           std::to_string(column) + ")"),
          detail_(what), line_(line), column_(column) {}
    const std::string& detail() const { return detail_; }
    int line() const { return line_; }
    int column() const { return column_; }

private:
    std::string detail_;
    int line_, column_;
};

}  // namespace xl
