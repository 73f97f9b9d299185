#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace plap {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of a formula (negative t, p < 2, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Equivalence ratios requested for P == Q.
class DegeneratePairError : public Error {
public:
    using Error::Error;
};

/// Time step that is not an integer multiple of the sampling step.
class GridMismatchError : public Error {
public:
    using Error::Error;
};

/// Difference or seminorm with no admissible step left on the interval.
class EmptyDomainError : public Error {
public:
    using Error::Error;
};

/// Hypothesis of an inequality is not satisfied; not a failure of the inequality.
class PreconditionError : public Error {
public:
    using Error::Error;
};

class UnreachableTargetError : public Error {
public:
    using Error::Error;
};

class UnsupportedDimensionError : public Error {
public:
    using Error::Error;
};

/// Sub-cylinder leaves the admissible interior of the trajectory domain.
class GeometryError : public Error {
public:
    using Error::Error;
};

/// Too few dyadic steps to fit an exponent.
class InsufficientResolutionError : public Error {
public:
    using Error::Error;
};

/// Configuration rejected before any computation.
class ValidationError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// Newton iteration failed; carries the residual history of the failing step.
class SolverFailure : public Error {
public:
    SolverFailure(const std::string& what, std::vector<double> residuals, int step_index = -1)
        : Error(what), residuals_(std::move(residuals)), step_index_(step_index) {}

    const std::vector<double>& residuals() const noexcept { return residuals_; }
    int step_index() const noexcept { return step_index_; }

private:
    std::vector<double> residuals_;
    int step_index_;
};

}  // namespace plap
