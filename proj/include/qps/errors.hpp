#ifndef QPS_ERRORS_HPP
#define QPS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qps {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Wavefunction is identically zero (or zero wherever a ratio is needed).
struct DegenerateStateError : Error {
    using Error::Error;
};

// Operation requires a normalized wavefunction.
struct NormalizationError : Error {
    using Error::Error;
};

// Requested point lies outside the grid.
struct OutOfDomainError : Error {
    using Error::Error;
};

// A stated precondition does not hold (e.g. non-real state passed to a
// real-state identity check).
struct PreconditionError : Error {
    using Error::Error;
};

// State kind has no closed form for the requested quantity.
struct NoClosedFormError : Error {
    using Error::Error;
};

struct NotAnEigenstateError : Error {
    using Error::Error;
};

// Quadratic form is not positive definite, or symplectic spectrum
// cannot be extracted.
struct SpectrumUndefinedError : Error {
    using Error::Error;
};

// Conjugate plane couples to other coordinates.
struct NotSeparableError : Error {
    using Error::Error;
};

// Propagation aborted (norm drift, node formation, ...).
struct PropagationError : Error {
    using Error::Error;
};

struct NodeFormationError : PropagationError {
    using PropagationError::PropagationError;
};

} // namespace qps

#endif
