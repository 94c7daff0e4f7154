// numeric.hpp: error types and the global numeric policy shared by every module.

#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace qprospect {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An input violates a stated invariant (shape, range, Hermiticity, ...).
/// `constraint()` names the violated invariant, e.g. "unit trace".
class ValidationError : public Error {
public:
    ValidationError(std::string constraint, const std::string& what)
        : Error(what), constraint_(std::move(constraint)) {}

    const std::string& constraint() const noexcept { return constraint_; }

private:
    std::string constraint_;
};

class ShapeError : public ValidationError {
public:
    explicit ShapeError(const std::string& what) : ValidationError("shape", what) {}
};

class IndexError : public ValidationError {
public:
    explicit IndexError(const std::string& what) : ValidationError("index range", what) {}
};

/// Stage ordering in a measurement pipeline is invalid.
class ProtocolError : public ValidationError {
public:
    explicit ProtocolError(const std::string& what) : ValidationError("stage order", what) {}
};

/// A numerical contract failed at evaluation time: a probability left its
/// admissible band, a conditioning event has zero probability, a lattice is
/// degenerate.
class NumericError : public Error {
public:
    using Error::Error;
};

/// Tolerances. `operator_tolerance()` governs Hermiticity, unit trace, PSD and
/// unitarity checks and can be overridden process-wide (the CLI reads
/// QPROSPECT_TOL). The remaining constants are fixed contract values.
namespace tolerance {

inline constexpr double kDefaultOperator = 1e-10;
/// Admissible band around [0,1] before a probability is clamped.
inline constexpr double kProbability = 1e-12;
/// POVM resolution-of-unity residual.
inline constexpr double kPovm = 1e-8;
/// Unit-norm check for evolved wave functions and amplitude matrices.
inline constexpr double kWaveNorm = 1e-8;
/// Minimum probability of an event used as a divisor.
inline constexpr double kDivisionGuard = 1e-12;
/// Minimal gap between eigenvalues of a nondegenerate observable.
inline constexpr double kSpectralGap = 1e-12;

double operator_tolerance() noexcept;
void set_operator_tolerance(double tol);

}  // namespace tolerance

/// Checks a raw probability against [-kProbability, 1 + kProbability] and
/// clamps it into [0,1]. Larger violations throw NumericError.
double checked_probability(double raw, const char* what);

}  // namespace qprospect
