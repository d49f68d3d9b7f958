#pragma once

#include <stdexcept>
#include <string>

namespace phipp {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// The requested divergence cannot be used here (e.g. L1 in the dual criterion).
class UnsupportedDivergenceError : public Error {
public:
    using Error::Error;
};

/// Sample is rank deficient / has a zero-variance coordinate.
class DegenerateSampleError : public Error {
public:
    using Error::Error;
};

/// q > 0 where p = 0 on a quadrature grid.
class AbsoluteContinuityError : public Error {
public:
    using Error::Error;
};

/// Truncation removed too many points for the estimates to make sense.
class OverTruncationError : public Error {
public:
    using Error::Error;
};

/// A plug-in density fell below the truncation floor where it should not.
class TruncationViolationError : public Error {
public:
    using Error::Error;
};

/// A geometric or configuration constraint was violated.
class ConstraintError : public Error {
public:
    using Error::Error;
};

/// Input file could not be parsed.
class IngestError : public Error {
public:
    using Error::Error;
};

/// Variance estimate degenerated to zero in a test statistic.
class DegenerateVarianceError : public Error {
public:
    using Error::Error;
};

}  // namespace phipp
