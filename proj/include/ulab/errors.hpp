#pragma once

#include <stdexcept>
#include <string>

namespace ulab {

// Precondition and data-validation failures throw. Mathematical outcomes that
// the tooling is designed to observe (a divergent net, a failed inequality)
// are returned as values instead, so callers can report them.
struct Error : std::runtime_error {
	using std::runtime_error::runtime_error;
};

struct NotLocal : Error {
	using Error::Error;
};
struct ShapeMismatch : Error {
	using Error::Error;
};
struct UnboundedMultiplier : Error {
	using Error::Error;
};
struct NoOracle : Error {
	using Error::Error;
};
struct EnumerationTooLarge : Error {
	using Error::Error;
};

struct FactorMismatch : Error {
	using Error::Error;
};

struct NotPositiveType : Error {
	using Error::Error;
};
struct HermitianDefect : Error {
	using Error::Error;
};
struct RepNotUnitary : Error {
	using Error::Error;
};
struct RepNotHomomorphism : Error {
	using Error::Error;
};

struct GradingViolation : Error {
	using Error::Error;
};
struct BundleMismatch : Error {
	using Error::Error;
};
struct FiberViolation : Error {
	using Error::Error;
};
struct NotUnitary : Error {
	using Error::Error;
};
struct NotHomomorphism : Error {
	using Error::Error;
};

struct WorldMismatch : Error {
	using Error::Error;
};
struct NotPositive : Error {
	using Error::Error;
};
struct NotDominated : Error {
	using Error::Error;
};
struct CauchyFailureError : Error {
	using Error::Error;
};

struct ValidationError : Error {
	using Error::Error;
};

}  // namespace ulab
