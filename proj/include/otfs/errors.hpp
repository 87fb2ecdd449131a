#pragma once

#include <stdexcept>
#include <string>

namespace otfs {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Shape/length mismatches and invalid sizes.
struct DimensionError : Error {
    using Error::Error;
};

// Invalid scalar parameters (negative SNR budgets, zero budgets, ...).
struct ParameterError : Error {
    using Error::Error;
};

// Work would exceed a configured enumeration budget.
struct CapacityError : Error {
    using Error::Error;
};

// MN outside the constructible Vandermonde dimension classes.
struct UnsupportedDimensionError : Error {
    using Error::Error;
};

// Ill-conditioned solve or similar numerical failure.
struct NumericalError : Error {
    using Error::Error;
};

// Caller violated an operation contract (e.g. non-Hermitian input).
struct ContractViolationError : Error {
    using Error::Error;
};

// Not enough samples/errors to report a statistically valid estimate.
struct StatisticalValidityError : Error {
    using Error::Error;
};

}  // namespace otfs
