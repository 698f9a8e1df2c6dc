#pragma once

#include <stdexcept>
#include <string>

namespace pwmix {

// Argument outside the mathematical domain of an operation (x outside [0,1],
// m < 2, malformed signature text, ...).
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// A documented precondition on the inputs does not hold (gcd(m,N) != 1 for a
// circulant, symmetric strategy on an asymmetric matrix, ...).
class PreconditionError : public std::invalid_argument {
public:
    explicit PreconditionError(const std::string& what) : std::invalid_argument(what) {}
};

// The request exceeds a hard size cap of an exhaustive algorithm.
class CapacityError : public std::length_error {
public:
    explicit CapacityError(const std::string& what) : std::length_error(what) {}
};

// A matrix lacks a structural property an operation relies on.
class StructuralError : public std::runtime_error {
public:
    explicit StructuralError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace pwmix
