#pragma once

#include <stdexcept>
#include <string>

namespace periodica {

// Error taxonomy. Three coarse classes map onto CLI exit codes:
//   parse errors -> 2, precision escalation candidates -> 3, broken internal
//   invariants -> 4.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct ParseError : Error {
    using Error::Error;
};

// Anything that a rerun at higher working precision can plausibly cure.
struct PrecisionError : Error {
    using Error::Error;
};

struct InternalError : Error {
    using Error::Error;
};

struct NonConvergence : PrecisionError {
    using PrecisionError::PrecisionError;
};
struct DiskEscape : PrecisionError {
    using PrecisionError::PrecisionError;
};
struct SlowConvergence : PrecisionError {
    using PrecisionError::PrecisionError;
};
struct ContinuationStuck : PrecisionError {
    using PrecisionError::PrecisionError;
};
struct MonodromyError : PrecisionError {
    using PrecisionError::PrecisionError;
};
struct RiemannCheckFailed : PrecisionError {
    using PrecisionError::PrecisionError;
};
struct PrecisionTooLow : PrecisionError {
    using PrecisionError::PrecisionError;
};
struct IdempotentSearchFailed : PrecisionError {
    using PrecisionError::PrecisionError;
};
struct AlgebraizeFailed : PrecisionError {
    using PrecisionError::PrecisionError;
};

struct GenusMismatch : Error {
    using Error::Error;
};
struct DegenerateDiagram : Error {
    using Error::Error;
};
// Monodromy not transitive / lifted graph disconnected: the input violates
// the standing absolute-irreducibility assumption.
struct NotIrreducible : Error {
    using Error::Error;
};
struct NonIntegerPairing : InternalError {
    using InternalError::InternalError;
};
struct NonUnitDivisor : InternalError {
    using InternalError::InternalError;
};
// User-supplied differential numerators are linearly dependent.
struct DependentNumerators : Error {
    using Error::Error;
};
// |df/dy| collapsed along a lift; valid lifts keep it bounded away from zero.
struct SmallDenominator : InternalError {
    using InternalError::InternalError;
};
struct OrderCapExceeded : PrecisionError {
    using PrecisionError::PrecisionError;
};
struct SingularAlphaBlock : PrecisionError {
    using PrecisionError::PrecisionError;
};
// A Gram matrix handed to the enumerator was not positive definite.  For
// Rosati forms this means the Hom basis upstream is wrong.
struct NotPositiveDefinite : InternalError {
    using InternalError::InternalError;
};
// Products of endomorphism basis elements failed to resolve as rational
// combinations of the basis; the numeric Hom basis is unreliable.
struct StructureConstantsNotRational : PrecisionError {
    using PrecisionError::PrecisionError;
};
// The recovered isomorphism set is not closed under composition.
struct ClosureFailure : PrecisionError {
    using PrecisionError::PrecisionError;
};

}  // namespace periodica
