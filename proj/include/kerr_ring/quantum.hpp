#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "kerr_ring/model.hpp"

namespace kerr_ring {

using SpMat = Eigen::SparseMatrix<cplx>;  // column-major

// Truncated two-mode Fock space: per-mode levels 0..n_max.
struct FockSpace {
    int n_max = 12;

    int local_dim() const { return n_max + 1; }
    int dim() const { return local_dim() * local_dim(); }          // Hilbert
    std::int64_t super_dim() const {                               // Liouville
        return static_cast<std::int64_t>(dim()) * dim();
    }
};

// Operator on the two-mode space, basis |n_a, n_b> at index n_a*(n_max+1)+n_b.
struct FockOperator {
    FockSpace space;
    SpMat entries;
};

struct DensityMatrix {
    FockSpace space;
    Eigen::MatrixXcd entries;

    cplx trace() const { return entries.trace(); }
    double hermiticity_error() const;  // max |rho - rho^dagger| entry
    double min_eigenvalue() const;
};

// Matrix acting on column-stacked vec(rho).
struct Superoperator {
    FockSpace space;
    SpMat mat;
};

enum class Mode { A, B };
enum class NoiseKind { Thermal, Dephasing };

struct StatisticsReport {
    std::vector<double> p_a, p_b;   // P_i(n), n = 0..n_max; each sums to 1
    double mean_a = 0.0, mean_b = 0.0;
    double mean_delta_n = 0.0;      // <n_a - n_b>
    double var_delta_n = 0.0;       // Var(Delta n), >= 0
    double sigma_shot = 0.0;        // sqrt(var_delta_n)
    double kappa = 0.0;             // for the SEM scaling below
    std::optional<double> snr;      // filled when a null reference is given

    double sem(double tau) const;   // sigma_shot / sqrt(kappa * tau)
};

// a = a_local (x) I, b = I (x) a_local, a_local|n> = sqrt(n)|n-1>.
std::pair<FockOperator, FockOperator> ladder_operators(FockSpace space);

// Rotating-frame Hamiltonian on the truncated space:
//   H = Delta (na + nb) + eps (na - nb)
//     + (u_a/2) a+^2 a^2 + (u_b/2) b+^2 b^2 + v na nb
//     - (conj(J) a+ b + J a b+)
//     - i sqrt(kappa) (f_a (a+ - a) + f_b (b+ - b))
// Hermitian exactly by construction (assembled from conjugate pairs).
FockOperator hamiltonian(const ModelParams& p, FockSpace space);

// Lindblad generator acting on vec(rho) (column stacking), with per-mode
// dissipators at rates gamma(1+n_th) for x, gamma n_th for x^dagger and
// gamma_phi for x^dagger x, x in {a, b}. Throws DimensionTooLarge when
// (n_max+1)^4 exceeds the budget (env KERR_RING_MAX_DIM, default 600000).
Superoperator liouvillian(const ModelParams& p, FockSpace space);

// Solves L vec(rho) = 0 with the trace row replacing one equation.
// Preconditioned iterative solve with a sparse-direct fallback; throws
// SingularSolve if the constrained system remains numerically singular.
// Result satisfies trace/Hermiticity/positivity invariants and
// ||L vec(rho)||_inf < 1e-10. `guess` warm-starts sweeps.
DensityMatrix steady_state(const Superoperator& liouvillian,
                           const Eigen::VectorXcd* guess = nullptr);

// Propagates vec(rho) by exp(L t) (shifted scaled Taylor evaluation of the
// exponential action). Throws DimensionTooLarge as above.
DensityMatrix evolve(const DensityMatrix& rho0, const Superoperator& liouvillian,
                     double t);

// P_mode(n): partial trace over the other mode, then the diagonal.
std::vector<double> photon_distribution(const DensityMatrix& rho, Mode mode);

// Var(Delta n) = <(na - nb)^2> - <na - nb>^2.
double variance_delta_n(const DensityMatrix& rho);

// Normal density with mean mu and variance sigma2 evaluated at x.
// Throws DegenerateVariance if sigma2 <= 0.
double pdf(double mu, double sigma2, double x);

// Standard error of the time-averaged imbalance: sigma_shot / sqrt(kappa tau).
double sem_sigma(double sigma_shot, double kappa, double tau);

// Distributions, means, Var(Delta n) of a state; snr left empty.
StatisticsReport make_statistics(const DensityMatrix& rho, const ModelParams& p);

struct SnrMap {
    NoiseKind kind = NoiseKind::Thermal;
    std::vector<double> tau_values;
    std::vector<double> noise_values;
    // Row-major over (tau, noise): index = it * noise_values.size() + jn.
    std::vector<double> snr;
    std::vector<std::uint8_t> flagged;  // steady-state solve failed

    double at(std::size_t it, std::size_t jn) const {
        return snr[it * noise_values.size() + jn];
    }
};

// For each noise value: steady states at Im[J] = p.j_im (signal) and
// Im[J] = 0 (null); SNR(tau) = |<dn>_sig - <dn>_null| / sem(sigma_shot, tau)
// with sigma_shot taken from the signal state.
SnrMap snr_map(const ModelParams& p, FockSpace space,
               const std::vector<double>& tau_values,
               const std::vector<double>& noise_values, NoiseKind kind,
               int threads = 1);

// Undriven lab-frame spectrum, exact within the conserved sector
// n_a + n_b = n_total: sorted eigenvalues per cross-Kerr value V.
std::vector<std::pair<double, std::vector<double>>>
undriven_spectrum(const ModelParams& p, const std::vector<double>& v_values,
                  int n_total);

// Diagonal mean-field energies E(n_a, n_b) on the same sector, sorted,
// emitted for comparison with the exact sector diagonalization.
std::vector<std::pair<double, std::vector<double>>>
undriven_spectrum_mean_field(const ModelParams& p,
                             const std::vector<double>& v_values, int n_total);

// Binary density-matrix dump: uint64 dimension header then row-major
// (re, im) pairs, little-endian 64-bit floats.
void write_density_matrix(const std::string& path, const DensityMatrix& rho);
DensityMatrix read_density_matrix(const std::string& path);

// Liouvillian dimension cap: (n_max+1)^4 <= budget.
std::int64_t liouvillian_dim_budget();

} // namespace kerr_ring
