#pragma once

#include <stdexcept>
#include <string>

namespace priorlab {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// numerics
struct NonFiniteError : Error {
    explicit NonFiniteError(double at)
        : Error("integrand returned NaN/inf at interior node " + std::to_string(at)), where(at) {}
    double where;
};
struct NotBracketedError : Error {
    using Error::Error;
};
struct InconclusiveError : Error {
    using Error::Error;
};

// measures
struct NonPositiveScalarError : Error {
    using Error::Error;
};
struct EmptyRestrictionError : Error {
    using Error::Error;
};
struct ZeroResultError : Error {
    using Error::Error;
};
struct DomainMismatchError : Error {
    using Error::Error;
};
struct AllProbesNullError : Error {
    using Error::Error;
};
struct NullProbeError : Error {
    using Error::Error;
};

// families
struct ZeroAtOriginError : Error {
    using Error::Error;
};
struct ZeroAtOneError : Error {
    using Error::Error;
};
struct NonFiniteDensityError : Error {
    using Error::Error;
};
struct MissingScalingHintError : Error {
    using Error::Error;
};

// convergence / posterior
struct ImproperMemberError : Error {
    using Error::Error;
};
struct MedianDriftError : Error {
    using Error::Error;
};
struct ZeroEvidenceError : Error {
    using Error::Error;
};
struct NotTightError : Error {
    using Error::Error;
};

}  // namespace priorlab
