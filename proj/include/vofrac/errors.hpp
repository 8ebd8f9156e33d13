#pragma once

#include <stdexcept>
#include <string>

namespace vofrac {

/// Argument outside the operator's domain (node index, time, window, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// The fractional integral was requested at order zero.
class SingularOrderError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Input that violates a model hypothesis (bounds on the order, k(0) = 0, u0 = 0, ...).
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical step could not be carried out.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Mode extraction design matrix too badly conditioned.
class IllPosedError : public NumericalError {
public:
    IllPosedError(const std::string& what, double condition)
        : NumericalError(what), condition_(condition) {}
    double condition() const noexcept { return condition_; }

private:
    double condition_;
};

} // namespace vofrac
