#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace phasespace {

/// Short scientific rendering for error messages.
inline std::string describe_value(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

/// Base for every error raised by the library. The CLI maps subclasses to exit codes.
class PhaseSpaceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Precondition failures: bad dimensions, invalid configuration, inadmissible inputs.
class PreconditionError : public PhaseSpaceError {
public:
    using PhaseSpaceError::PhaseSpaceError;
};

/// The Fock truncation cannot represent the requested state or operator accurately.
class TruncationInsufficient : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

class DimensionMismatch : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

class GridMismatch : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

class SingularCovariance : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

class Unnormalized : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

/// A field that should be real came back with a significant imaginary part.
class NonHermitianSource : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

/// Filtered state and retrofiltered effect are (numerically) orthogonal: the
/// record that produced them has zero probability.
class OrthogonalBoundary : public PhaseSpaceError {
public:
    using PhaseSpaceError::PhaseSpaceError;
};

/// Classical analogue of OrthogonalBoundary.
class ZeroEvidence : public OrthogonalBoundary {
public:
    using OrthogonalBoundary::OrthogonalBoundary;
};

class IoError : public PhaseSpaceError {
public:
    using PhaseSpaceError::PhaseSpaceError;
};

}  // namespace phasespace
