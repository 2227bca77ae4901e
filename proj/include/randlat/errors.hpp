#pragma once

#include <stdexcept>
#include <string>

namespace randlat {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NonSquare : public Error {
public:
    using Error::Error;
};

class NonUnimodular : public Error {
public:
    using Error::Error;
};

/// Gram–Schmidt degeneracy or an ill-conditioned basis.
class NumericalFailure : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// Raised when an enumeration would produce more than the point budget.
class Overflow : public Error {
public:
    using Error::Error;
};

/// Brute-force coefficient box does not cover the region.
class CoverageError : public Error {
public:
    using Error::Error;
};

class RejectionStall : public Error {
public:
    using Error::Error;
};

class NotPrime : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

/// Invalid region or radial-set parameters.
class RegionError : public Error {
public:
    using Error::Error;
};

/// Invalid experiment or sampler configuration (CLI exit code 2).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A check exceeded its wall-clock budget.
class BudgetExceeded : public Error {
public:
    using Error::Error;
};

}  // namespace randlat
