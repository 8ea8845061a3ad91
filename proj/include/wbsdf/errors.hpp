#pragma once

#include <stdexcept>
#include <string>

namespace wbsdf {

// Error taxonomy shared by all modules. The CLI maps these onto exit codes:
// bad arguments/data -> 2, scene problems -> 3, failed validation checks -> 1.

struct ArgumentError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Input values that are well-formed but physically/numerically unusable.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A requested computation cannot meet its accuracy contract (undersampled
// grid, non-convergent series, Nyquist violation).
struct PrecisionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An internal identity failed (e.g. WDF imaginary residue above tolerance).
struct ConsistencyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// No valid sample exists (e.g. every diffraction order evanescent).
struct SamplingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Scene or request outside the supported feature set.
struct ScopeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace wbsdf
