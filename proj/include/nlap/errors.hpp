#pragma once

#include <stdexcept>
#include <string>

namespace nlap {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Evaluation at a pole (nonpositive integer argument of Gamma/digamma).
class PoleError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Result not representable in double precision.
class OverflowError : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

/// Invalid parameter combination (excluded beta, bad series parameters, bad config).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Iterative method ran out of its term/subdivision budget.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// No evaluation route produced a trustworthy value.
class EvaluationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Mismatched torus/grid shapes.
class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Right-hand side violates the mean-zero solvability condition.
class CompatibilityError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Eigenvalue too close to zero to divide by.
class SingularEigenvalueError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace nlap
