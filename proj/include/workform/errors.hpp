#pragma once

#include <stdexcept>
#include <string>

namespace workform {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Evaluation hit an invalid argument (ln of a non-positive value,
/// fractional power of a negative base, negative power of zero).
struct DomainError : Error {
    using Error::Error;
};

/// A quadrature-backed coefficient failed its error estimate.
struct QuadratureError : Error {
    using Error::Error;
};

/// Operands live on different ambient dimensions.
struct DimensionMismatch : Error {
    using Error::Error;
};

/// Operation applied to a form of unsupported degree.
struct DegreeError : Error {
    using Error::Error;
};

/// Metric inversion failed at a sample point.
struct SingularMetric : Error {
    using Error::Error;
};

/// No valid sample points could be drawn from the chart box.
struct SamplingExhausted : Error {
    using Error::Error;
};

/// torsion_split precondition: the input 1-form is not antiexact.
struct NotAntiexact : Error {
    using Error::Error;
};

/// recursive_solution precondition: the torsion does not vanish.
struct NonzeroTorsion : Error {
    using Error::Error;
};

/// The Frobenius reconstruction identity failed at a sample point.
struct ReconstructionFailure : Error {
    using Error::Error;
};

/// An explicit integrating factor vanishes somewhere on the chart box.
struct InvalidGammaChoice : Error {
    using Error::Error;
};

/// Text input could not be parsed. Carries 1-based line/column.
struct SyntaxError : Error {
    int line;
    int column;
    std::string token;
    SyntaxError(const std::string& msg, int line_, int column_, std::string token_ = "")
        : Error(msg + " at " + std::to_string(line_) + ":" + std::to_string(column_) +
                (token_.empty() ? "" : " near '" + token_ + "'")),
          line(line_), column(column_), token(std::move(token_)) {}
};

/// Terms of different form degree were combined in one expression.
struct DegreeMixingError : SyntaxError {
    using SyntaxError::SyntaxError;
};

/// A variable name is not valid for the requested dimension.
struct UnknownVariable : SyntaxError {
    using SyntaxError::SyntaxError;
};

/// The value contains a quadrature-backed coefficient that has no
/// serializable text representation.
struct PrintError : Error {
    using Error::Error;
};

}  // namespace workform
