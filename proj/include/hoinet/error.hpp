#pragma once

#include <stdexcept>
#include <string>

namespace hoinet {

/// Bad input: malformed data, invalid indices, violated preconditions.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical routine could not produce a usable result (singular systems,
/// non-convergence, loss of positive definiteness).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Model identification failed on the given series (rank deficiency,
/// non-stationary fit).
class IdentificationError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace hoinet
