// errors.hpp - Exception types shared by the numerical modules and the CLI

#pragma once

#include <stdexcept>
#include <string>

namespace rabi {

// Argument outside the mathematical domain of an operation (negative x, degree over limit, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A finite Fock truncation cannot represent the requested state to the required accuracy.
class TruncationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An iterative method exhausted its budget without meeting its tolerance.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Approximate levels could not be paired unambiguously with exact levels.
class AmbiguousMatchError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace rabi
