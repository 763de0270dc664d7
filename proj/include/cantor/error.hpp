#pragma once

#include <stdexcept>
#include <string>

namespace cantor {

/// Input outside the mathematical domain of an operation (x outside [0,1], lo > hi, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A well-posed computation that could not be completed: precision cap, work budget,
/// inadmissible scale chain.
class ComputationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class PrecisionCapExceeded : public ComputationError {
public:
    using ComputationError::ComputationError;
};

class GapTooNarrow : public ComputationError {
public:
    using ComputationError::ComputationError;
};

class BudgetExceeded : public ComputationError {
public:
    using ComputationError::ComputationError;
};

} // namespace cantor
