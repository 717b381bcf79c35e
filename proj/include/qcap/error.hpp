#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qcap {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Matrix that fails the uncertainty principle or symmetry checks.
class InvalidCovariance : public DomainError {
public:
    using DomainError::DomainError;
};

class InvalidEnvironment : public DomainError {
public:
    using DomainError::DomainError;
};

/// The requested oracle cannot represent the given environment.
class UnsupportedOracle : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Fock-space truncation too coarse for the requested state.
class TruncationError : public std::runtime_error {
public:
    TruncationError(const std::string& what, std::size_t suggested_dim)
        : std::runtime_error(what + " (suggested dimension " + std::to_string(suggested_dim) + ")"),
          suggested_dim_(suggested_dim) {}

    std::size_t suggested_dim() const noexcept { return suggested_dim_; }

private:
    std::size_t suggested_dim_;
};

} // namespace qcap
