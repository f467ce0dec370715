#pragma once

#include <stdexcept>
#include <string>

namespace kerr_ring {

// Adaptive step-size control stalled (stiff or diverging trajectory).
struct StepSizeUnderflow : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Both mode populations are zero; asymmetry ratio undefined.
struct DegenerateState : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Requested Fock truncation exceeds the configured memory budget.
struct DimensionTooLarge : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Trace-constrained Liouvillian system is rank deficient beyond the
// expected single null vector.
struct SingularSolve : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Normal PDF requested with sigma^2 <= 0.
struct DegenerateVariance : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Config file / --param override cannot be parsed or is inconsistent.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace kerr_ring
