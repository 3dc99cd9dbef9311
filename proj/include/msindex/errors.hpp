#pragma once

#include <stdexcept>
#include <string>

namespace msindex {

// Parameter outside the family interval, or an integrand that blew up at an interior node.
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NonConvergence : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class SingularMatrix : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NotSelfAdjoint : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class RiemannMatrixViolation : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class UnresolvedTransition : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatch : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace msindex
