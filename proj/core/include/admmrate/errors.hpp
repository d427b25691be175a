#ifndef ADMMRATE_ERRORS_HPP
#define ADMMRATE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace admmrate {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// No solver is implemented for the given (function kind, A, E) combination.
struct UnsupportedCombination : Error {
    using Error::Error;
};

// The quadratic prox system matrix is singular beyond tolerance.
struct SingularSystem : Error {
    using Error::Error;
};

// Piecewise-linear data violates monotonicity preconditions.
struct InvalidPiecewise : Error {
    using Error::Error;
};

// Assumption-4 check failed: the smoothness/curvature bound matrices do not
// commute, so a shared orthogonal eigenbasis does not exist. The caller may
// rebuild with diagonal (looser) bounds.
struct NonCommuting : Error {
    using Error::Error;
};

// Input is expected to be orthogonal but is not.
struct NotOrthogonal : Error {
    using Error::Error;
};

struct DegenerateCounts : Error {
    using Error::Error;
};

struct StructureMismatch : Error {
    using Error::Error;
};

// A local Jacobian is requested at a point sitting on a segment junction,
// where the derivative is set-valued.
struct BreakpointAmbiguity : Error {
    using Error::Error;
};

struct InsufficientHistory : Error {
    using Error::Error;
};

} // namespace admmrate

#endif
