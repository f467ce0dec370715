#include "kerr_ring/model.hpp"

#include <cmath>

namespace kerr_ring {

ValidationResult validate(const ModelParams& p) {
    ValidationResult r;
    auto finite = [](double x) { return std::isfinite(x); };

    if (!(p.kappa >= 0.0)) r.violations.push_back("kappa >= 0");
    if (!(p.gamma >= 0.0)) r.violations.push_back("gamma >= 0");
    if (!(p.n_th >= 0.0)) r.violations.push_back("n_th >= 0");
    if (!(p.gamma_phi >= 0.0)) r.violations.push_back("gamma_phi >= 0");

    for (double x : {p.delta, p.epsilon, p.u_a, p.u_b, p.v, p.j_re, p.j_im,
                     p.f_a, p.f_b})
        if (!finite(x)) {
            r.violations.push_back("all couplings and drives finite");
            break;
        }

    // delta == omega0 - omega_d whenever both frequencies are supplied
    // (NaN marks "not supplied"; delta is primary otherwise).
    if (finite(p.omega0) && finite(p.omega_d) &&
        std::abs(p.delta - (p.omega0 - p.omega_d)) > 1e-12)
        r.violations.push_back("delta == omega0 - omega_d");

    return r;
}

double detuning_from_frequencies(double omega0, double omega_d) {
    return omega0 - omega_d;
}

} // namespace kerr_ring
