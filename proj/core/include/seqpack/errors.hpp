#pragma once

#include <stdexcept>
#include <string>

namespace seqpack {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Fewer than 3 distinct points, or all points collinear.
struct DegenerateInput : Error {
    using Error::Error;
};

// Plate shrink factor outside (0, 1].
struct InvalidSigma : Error {
    using Error::Error;
};

// Malformed scene file; message carries the field path.
struct SceneError : Error {
    using Error::Error;
};

// Malformed schedule file; message carries the field path.
struct ScheduleError : Error {
    using Error::Error;
};

// Malformed SMT-LIB2 text; message carries the offending fragment.
struct ParseError : Error {
    using Error::Error;
};

// External solver process crashed or produced unusable output.
// Deliberately distinct from an UNSAT verdict.
struct BackendError : Error {
    using Error::Error;
};

// The lazy refinement loop exceeded its finite upper bound; indicates a bug.
struct RefinementCapExceeded : Error {
    using Error::Error;
};

// A single object cannot be placed alone on the full plate.
struct InstanceError : Error {
    using Error::Error;
};

// A group is infeasible even on the unshrunk plate; the caller shrinks the
// group and retries.
struct InfeasibleAtOne : Error {
    using Error::Error;
};

// A solve ran past its wall-clock budget.
struct SolveTimeout : Error {
    using Error::Error;
};

// Every strategy of a portfolio failed or timed out.
struct AllStrategiesFailed : Error {
    using Error::Error;
};

// A checked internal invariant does not hold; indicates a bug.
struct InternalError : Error {
    using Error::Error;
};

} // namespace seqpack
