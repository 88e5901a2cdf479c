#pragma once

#include <stdexcept>
#include <string>

namespace sacd {

// Base class for all solver errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Matrix passed as a closed-loop/Lyapunov coefficient is not Hurwitz.
class NotHurwitzError : public Error {
public:
    using Error::Error;
};

// Symmetric input expected but ||W - W^T|| exceeds tolerance.
class NonSymmetricError : public Error {
public:
    using Error::Error;
};

// (A, B) fails the PBH stabilizability test.
class NotStabilizableError : public Error {
public:
    using Error::Error;
};

// (A, C) fails the PBH detectability test.
class NotDetectableError : public Error {
public:
    using Error::Error;
};

// A dense decomposition failed or a stabilizing Riccati solution could not
// be extracted (e.g. defective invariant subspace).
class SolverFailureError : public Error {
public:
    using Error::Error;
};

// Iterative decomposition did not converge.
class ConvergenceFailureError : public Error {
public:
    using Error::Error;
};

// Inputs violate a documented precondition (dimensions, definiteness,
// or a RiccatiPair that does not solve its CAREs).
class InconsistentInputError : public Error {
public:
    using Error::Error;
};

// A finite-difference probe left the stabilizable/detectable domain.
class PerturbationInfeasibleError : public Error {
public:
    using Error::Error;
};

// Backtracking line search shrank below the minimum step without acceptance.
class LineSearchStallError : public Error {
public:
    using Error::Error;
};

// Starting configuration is outside the stabilizable/detectable domain.
class InfeasibleInitError : public Error {
public:
    using Error::Error;
};

// An optimization update produced NaN/Inf entries.
class NonFiniteIterateError : public Error {
public:
    using Error::Error;
};

// A structure-constrained matrix has nonzeros on forbidden entries.
class MaskViolationError : public Error {
public:
    using Error::Error;
};

// Problem-file ingestion failed; message names the offending field.
class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace sacd
