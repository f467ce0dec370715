#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <vector>

namespace kerr_ring {

using cplx = std::complex<double>;

// Which form of the equations of motion to use for the mode-splitting term.
// AppendixB: epsilon enters the detuning once (Delta +/- epsilon), the form
// used by the steady-state analysis. MainText: the EOM as literally printed
// carries an extra epsilon on top of omega_a = omega_0 + epsilon, so the
// splitting effectively doubles. Both are selectable; AppendixB is default.
enum class EomConvention { AppendixB, MainText };

// All physical parameters of the rotating-frame two-mode model. Frequencies
// and rates are dimensionless multiples of the total decay gamma (the
// figures quote parameters "in units of dissipation gamma"); an external
// scale factor can convert to SI for reporting, none is stored here.
// Immutable by convention after construction; safe to share across threads.
struct ModelParams {
    double omega0 = std::nan("");  // lab-frame cavity frequency (reporting + undriven spectrum)
    double omega_d = std::nan("");  // drive frequency
    double delta = 0.0;            // detuning Delta = omega0 - omega_d (primary)
    double epsilon = 0.0;          // mode splitting: omega_a = omega0 + eps, omega_b = omega0 - eps
    double u_a = 0.0;              // self-Kerr, mode a
    double u_b = 0.0;              // self-Kerr, mode b
    double v = 0.0;                // cross-Kerr
    double j_re = 0.0;             // Re[J] exchange coupling
    double j_im = 0.0;             // Im[J]; nonzero encodes TRSB
    double kappa = 0.0;            // external coupling
    double gamma = 0.0;            // total decay
    double f_a = 0.0;              // drive amplitude, mode a
    double f_b = 0.0;              // drive amplitude, mode b
    double n_th = 0.0;             // thermal occupation (quantum module)
    double gamma_phi = 0.0;        // pure dephasing rate (quantum module)
    EomConvention eom_convention = EomConvention::AppendixB;

    cplx j() const { return {j_re, j_im}; }
    // Effective splitting entering the equations of motion.
    double epsilon_eff() const {
        return eom_convention == EomConvention::MainText ? 2.0 * epsilon : epsilon;
    }
};

struct ValidationResult {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

// Checks the ModelParams invariants; never mutates the input. Violations are
// returned as data, one human-readable string each.
ValidationResult validate(const ModelParams& p);

// Delta = omega0 - omega_d.
double detuning_from_frequencies(double omega0, double omega_d);

} // namespace kerr_ring
