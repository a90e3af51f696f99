#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace superint {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the domain of a field node (tabulated range, negative base, r too small, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Requested derivative order exceeds what a node or configuration supports.
class OrderOverflow : public Error {
public:
    using Error::Error;
};

/// Division by an exact or numerical zero.
class DivisionByZero : public DomainError {
public:
    using DomainError::DomainError;
};

/// Precondition violated by the caller.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A numerical rank decision could not be made: the singular-value gap around the
/// threshold is below the configured factor.
class IndeterminateRank : public Error {
public:
    IndeterminateRank(const std::string& what, std::vector<double> spectrum)
        : Error(what), spectrum_(std::move(spectrum)) {}

    const std::vector<double>& spectrum() const noexcept { return spectrum_; }

private:
    std::vector<double> spectrum_;
};

/// Numerical integration could not proceed (step underflow, singular locus, negative discriminant).
class IntegrationError : public Error {
public:
    using Error::Error;
};

}  // namespace superint
