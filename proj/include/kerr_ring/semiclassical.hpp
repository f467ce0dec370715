#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "kerr_ring/model.hpp"

namespace kerr_ring {

// Mean-field amplitudes of the two counterpropagating modes.
struct SemiclassicalState {
    cplx alpha{0.0, 0.0};
    cplx beta{0.0, 0.0};

    double n_alpha() const { return std::norm(alpha); }
    double n_beta() const { return std::norm(beta); }
};

struct Trajectory {
    std::vector<double> times;               // strictly increasing
    std::vector<SemiclassicalState> states;  // same length as times
    // Residual of the equations of motion at the final state.
    double final_residual = 0.0;
};

enum class Stability { Stable, Unstable, Marginal };

struct FixedPoint {
    SemiclassicalState state;
    double residual_norm = 0.0;
    Stability stability = Stability::Marginal;
    double f_in = 0.0;  // common drive at which the point was found
};

// dalpha/dt, dbeta/dt packed as a SemiclassicalState-shaped derivative:
//   dalpha = (-i(Delta + eps + u_a n_a + v n_b) - gamma/2) alpha
//            + i conj(J) beta + sqrt(kappa) f_a
//   dbeta  = (-i(Delta - eps + u_b n_b + v n_a) - gamma/2) beta
//            + i J alpha + sqrt(kappa) f_b
SemiclassicalState eom_rhs(const SemiclassicalState& s, const ModelParams& p);

// Adaptive Dormand-Prince integration to t_end with abs/rel tolerance `tol`.
// Throws StepSizeUnderflow if step control stalls.
Trajectory integrate(const SemiclassicalState& s0, const ModelParams& p,
                     double t_end, double tol);

// Euclidean norm of (dalpha/dt, dbeta/dt); zero iff fixed point.
double steady_state_residual(const SemiclassicalState& s, const ModelParams& p);

// Multistart damped Newton on the four real steady-state equations.
// Starts are seeded and deterministic; converged roots are deduplicated
// (amplitude distance < 1e-6), verified against the steady-state photon
// number equations to 1e-8 relative, and classified for stability.
std::vector<FixedPoint> find_steady_states(const ModelParams& p, int n_starts,
                                           std::uint64_t seed);

// Drive sweep: find_steady_states at each f (applied to both modes),
// augmented by warm-start continuation from neighbouring drive values.
// Deterministic per-value seeds.
std::vector<std::pair<double, std::vector<FixedPoint>>>
sweep_drive(const ModelParams& p, const std::vector<double>& f_values,
            int n_starts = 64, std::uint64_t seed = 0, int threads = 1);

// (n_alpha - n_beta) / (n_alpha + n_beta), in [-1, 1].
// Throws DegenerateState when both populations are zero.
double asymmetry_ratio(const SemiclassicalState& s);

} // namespace kerr_ring
