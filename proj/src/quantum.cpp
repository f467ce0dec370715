#include "kerr_ring/quantum.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <vector>

#include <unsupported/Eigen/KroneckerProduct>

#include "kerr_ring/detail/parallel.hpp"
#include "kerr_ring/errors.hpp"

namespace kerr_ring {

namespace {

const cplx kI{0.0, 1.0};
constexpr double kResidualTol = 1e-10;
constexpr std::int64_t kDefaultDimBudget = 600000;

SpMat sparse_identity(int n) {
    SpMat id(n, n);
    id.setIdentity();
    return id;
}

} // namespace

// ---------------------------------------------------------------------------
// DensityMatrix / StatisticsReport members
// ---------------------------------------------------------------------------

double DensityMatrix::hermiticity_error() const {
    return (entries - entries.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
    Eigen::MatrixXcd herm = 0.5 * (entries + entries.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm,
                                                           Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

double StatisticsReport::sem(double tau) const {
    return sem_sigma(sigma_shot, kappa, tau);
}

// ---------------------------------------------------------------------------
// Operators
// ---------------------------------------------------------------------------

std::pair<FockOperator, FockOperator> ladder_operators(FockSpace space) {
    const int local = space.local_dim();
    SpMat a_local(local, local);
    {
        std::vector<Eigen::Triplet<cplx>> trips;
        trips.reserve(local - 1);
        for (int n = 1; n < local; ++n)
            trips.emplace_back(n - 1, n, cplx(std::sqrt(double(n)), 0.0));
        a_local.setFromTriplets(trips.begin(), trips.end());
    }
    SpMat id = sparse_identity(local);
    FockOperator a{space, SpMat(Eigen::kroneckerProduct(a_local, id))};
    FockOperator b{space, SpMat(Eigen::kroneckerProduct(id, a_local))};
    return {std::move(a), std::move(b)};
}

FockOperator hamiltonian(const ModelParams& p, FockSpace space) {
    const int local = space.local_dim();
    const int dim = space.dim();
    auto [a, b] = ladder_operators(space);

    // Diagonal part, assembled exactly per basis state |n_a, n_b>:
    //   Delta (n_a + n_b) + eps (n_a - n_b)
    //   + (u_a/2) n_a (n_a - 1) + (u_b/2) n_b (n_b - 1) + v n_a n_b
    std::vector<Eigen::Triplet<cplx>> trips;
    trips.reserve(dim);
    for (int na = 0; na < local; ++na) {
        for (int nb = 0; nb < local; ++nb) {
            const int idx = na * local + nb;
            const double e = p.delta * (na + nb) + p.epsilon * (na - nb) +
                             0.5 * p.u_a * na * (na - 1) +
                             0.5 * p.u_b * nb * (nb - 1) + p.v * na * nb;
            if (e != 0.0) trips.emplace_back(idx, idx, cplx(e, 0.0));
        }
    }
    SpMat h(dim, dim);
    h.setFromTriplets(trips.begin(), trips.end());

    // Exchange and drive enter as X + X^dagger, so H is Hermitian exactly.
    const SpMat adag = a.entries.adjoint();
    const SpMat bdag = b.entries.adjoint();
    const double sk = std::sqrt(p.kappa);
    SpMat x = (-std::conj(p.j())) * SpMat(adag * b.entries);
    x += (-kI * sk * p.f_a) * adag;
    x += (-kI * sk * p.f_b) * bdag;
    h += x + SpMat(x.adjoint());
    h.makeCompressed();
    return {space, std::move(h)};
}

std::int64_t liouvillian_dim_budget() {
    if (const char* env = std::getenv("KERR_RING_MAX_DIM")) {
        char* end = nullptr;
        const long long v = std::strtoll(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return v;
    }
    return kDefaultDimBudget;
}

Superoperator liouvillian(const ModelParams& p, FockSpace space) {
    const std::int64_t budget = liouvillian_dim_budget();
    if (space.super_dim() > budget) {
        // ~14 stored entries per row (complex value + index) in the generator.
        const std::int64_t mb = space.super_dim() * 14 * 24 / (1 << 20);
        throw DimensionTooLarge(
            "Liouvillian dimension (n_max+1)^4 = " +
            std::to_string(space.super_dim()) + " exceeds the limit " +
            std::to_string(budget) + " (approx. " + std::to_string(mb) +
            " MB sparse storage); raise KERR_RING_MAX_DIM or lower n_max");
    }

    const int dim = space.dim();
    const SpMat id = sparse_identity(dim);
    const SpMat h = hamiltonian(p, space).entries;

    // Column-stacking convention: vec(A rho B) = (B^T (x) A) vec(rho).
    SpMat l = SpMat(Eigen::kroneckerProduct(id, (-kI * h).eval())) +
              SpMat(Eigen::kroneckerProduct((kI * SpMat(h.transpose())).eval(), id));

    auto add_dissipator = [&](const SpMat& c, double rate) {
        if (rate <= 0.0) return;
        const SpMat cdag = c.adjoint();
        const SpMat ctc = SpMat(cdag * c).pruned();
        l += rate * SpMat(Eigen::kroneckerProduct(SpMat(c.conjugate()), c));
        l += (-0.5 * rate) * SpMat(Eigen::kroneckerProduct(id, ctc));
        l += (-0.5 * rate) * SpMat(Eigen::kroneckerProduct(SpMat(ctc.transpose()), id));
    };

    auto [a, b] = ladder_operators(space);
    for (const SpMat* x : {&a.entries, &b.entries}) {
        const SpMat xdag = x->adjoint();
        add_dissipator(*x, p.gamma * (1.0 + p.n_th));
        add_dissipator(xdag, p.gamma * p.n_th);
        add_dissipator(SpMat(xdag * (*x)).pruned(), p.gamma_phi);
    }
    l.makeCompressed();
    return {space, std::move(l)};
}

// ---------------------------------------------------------------------------
// Steady state
// ---------------------------------------------------------------------------

namespace {

// rho from a Liouville-space vector (column stacking), symmetrized and
// trace-normalized.
DensityMatrix density_from_vec(const Eigen::VectorXcd& x, FockSpace space) {
    const int dim = space.dim();
    DensityMatrix rho;
    rho.space = space;
    rho.entries = Eigen::Map<const Eigen::MatrixXcd>(x.data(), dim, dim);
    rho.entries = 0.5 * (rho.entries + rho.entries.adjoint()).eval();
    const cplx tr = rho.entries.trace();
    if (std::abs(tr) < 1e-300)
        throw SingularSolve("steady-state candidate has zero trace");
    rho.entries /= tr;
    return rho;
}

double liouvillian_residual(const SpMat& l, const DensityMatrix& rho) {
    Eigen::Map<const Eigen::VectorXcd> v(rho.entries.data(),
                                         rho.entries.size());
    return (l * v).cwiseAbs().maxCoeff();
}

bool invariants_ok(const SpMat& l, const DensityMatrix& rho) {
    if (!rho.entries.allFinite()) return false;
    if (std::abs(rho.trace() - cplx(1.0, 0.0)) > 1e-10) return false;
    if (rho.hermiticity_error() > 1e-10) return false;
    if (rho.min_eigenvalue() < -1e-8) return false;
    return liouvillian_residual(l, rho) < kResidualTol;
}

} // namespace

DensityMatrix steady_state(const Superoperator& liouvillian,
                           const Eigen::VectorXcd* guess) {
    const FockSpace space = liouvillian.space;
    const int dim = space.dim();
    const auto n = static_cast<std::int64_t>(liouvillian.mat.rows());

    // Replace the first row of L with the trace functional; the system
    // A vec(rho) = e_0 then pins tr(rho) = 1 on the null space of L.
    std::vector<Eigen::Triplet<cplx>> trips;
    trips.reserve(liouvillian.mat.nonZeros() + dim);
    for (int k = 0; k < liouvillian.mat.outerSize(); ++k)
        for (SpMat::InnerIterator it(liouvillian.mat, k); it; ++it)
            if (it.row() != 0) trips.emplace_back(it.row(), it.col(), it.value());
    for (int i = 0; i < dim; ++i)
        trips.emplace_back(0, i * (dim + 1), cplx(1.0, 0.0));
    SpMat a(n, n);
    a.setFromTriplets(trips.begin(), trips.end());
    a.makeCompressed();

    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n);
    rhs[0] = cplx(1.0, 0.0);

    // Preconditioned iterative solve, escalating preconditioner strength;
    // a sparse direct factorization is the last resort (expensive but robust).
    struct IlutSetting {
        double drop;
        int fill;
    };
    // The factorization cost dominates: a weak ILUT already brings BiCGSTAB
    // home in ~20 iterations on these Liouvillians, so start cheap and only
    // escalate when convergence or the invariants fail.
    for (const IlutSetting setting : {IlutSetting{1e-2, 7}, IlutSetting{1e-3, 10},
                                      IlutSetting{1e-4, 15}, IlutSetting{1e-5, 20},
                                      IlutSetting{1e-6, 30}}) {
        Eigen::BiCGSTAB<SpMat, Eigen::IncompleteLUT<cplx>> solver;
        solver.preconditioner().setDroptol(setting.drop);
        solver.preconditioner().setFillfactor(setting.fill);
        solver.setTolerance(1e-13);
        solver.setMaxIterations(500);
        solver.compute(a);
        if (solver.info() != Eigen::Success) continue;
        Eigen::VectorXcd x =
            guess ? solver.solveWithGuess(rhs, *guess).eval() : solver.solve(rhs).eval();
        if (!x.allFinite()) continue;
        DensityMatrix rho = density_from_vec(x, space);
        if (invariants_ok(liouvillian.mat, rho)) return rho;
    }

    {
        Eigen::SparseLU<SpMat> solver;
        solver.compute(a);
        if (solver.info() == Eigen::Success) {
            Eigen::VectorXcd x = solver.solve(rhs);
            if (x.allFinite()) {
                DensityMatrix rho = density_from_vec(x, space);
                if (invariants_ok(liouvillian.mat, rho)) return rho;
            }
        }
    }
    throw SingularSolve(
        "trace-constrained Liouvillian solve failed all backends (residual or "
        "positivity out of tolerance)");
}

// ---------------------------------------------------------------------------
// Time evolution: shifted, scaled Taylor evaluation of exp(L t) vec(rho).
// ---------------------------------------------------------------------------

DensityMatrix evolve(const DensityMatrix& rho0, const Superoperator& liouvillian,
                     double t) {
    if (t == 0.0) return rho0;

    const auto n = static_cast<std::int64_t>(liouvillian.mat.rows());
    cplx mu = 0.0;
    for (int k = 0; k < liouvillian.mat.outerSize(); ++k)
        for (SpMat::InnerIterator it(liouvillian.mat, k); it; ++it)
            if (it.row() == it.col()) mu += it.value();
    mu /= static_cast<double>(n);

    SpMat b = liouvillian.mat;
    {
        SpMat shift(b.rows(), b.cols());
        shift.setIdentity();
        b -= mu * shift;
    }
    // 1-norm of the shifted generator sets the substep count (theta ~ 4 keeps
    // the Taylor series short and free of destructive cancellation).
    double norm_b = 0.0;
    for (int k = 0; k < b.outerSize(); ++k) {
        double col = 0.0;
        for (SpMat::InnerIterator it(b, k); it; ++it) col += std::abs(it.value());
        norm_b = std::max(norm_b, col);
    }
    const int substeps =
        std::max(1, static_cast<int>(std::ceil(norm_b * t / 4.0)));
    const double dt = t / substeps;
    const cplx step_scale = std::exp(mu * dt);

    Eigen::Map<const Eigen::VectorXcd> v0(rho0.entries.data(),
                                          rho0.entries.size());
    Eigen::VectorXcd v = v0;
    Eigen::VectorXcd term(n), w(n);
    for (int s = 0; s < substeps; ++s) {
        w = v;
        term = v;
        int small_streak = 0;
        for (int k = 1; k <= 60 && small_streak < 2; ++k) {
            term = (b * term).eval() * (dt / k);
            w += term;
            const double tnorm = term.cwiseAbs().maxCoeff();
            const double wnorm = w.cwiseAbs().maxCoeff();
            small_streak = (tnorm <= 1e-16 * wnorm) ? small_streak + 1 : 0;
        }
        v = step_scale * w;
    }
    return density_from_vec(v, rho0.space);
}

// ---------------------------------------------------------------------------
// Statistics
// ---------------------------------------------------------------------------

std::vector<double> photon_distribution(const DensityMatrix& rho, Mode mode) {
    const int local = rho.space.local_dim();
    std::vector<double> p(local, 0.0);
    for (int na = 0; na < local; ++na)
        for (int nb = 0; nb < local; ++nb) {
            const int idx = na * local + nb;
            p[mode == Mode::A ? na : nb] += rho.entries(idx, idx).real();
        }
    return p;
}

double variance_delta_n(const DensityMatrix& rho) {
    // Delta n = n_a - n_b is diagonal in the Fock basis, so S15 reduces to
    // moments of the diagonal of rho.
    const int local = rho.space.local_dim();
    double m1 = 0.0, m2 = 0.0;
    for (int na = 0; na < local; ++na)
        for (int nb = 0; nb < local; ++nb) {
            const int idx = na * local + nb;
            const double d = na - nb;
            const double w = rho.entries(idx, idx).real();
            m1 += d * w;
            m2 += d * d * w;
        }
    return m2 - m1 * m1;
}

double pdf(double mu, double sigma2, double x) {
    if (!(sigma2 > 0.0))
        throw DegenerateVariance("pdf requires sigma^2 > 0, got " +
                                 std::to_string(sigma2));
    const double z = x - mu;
    return std::exp(-z * z / (2.0 * sigma2)) / std::sqrt(2.0 * M_PI * sigma2);
}

double sem_sigma(double sigma_shot, double kappa, double tau) {
    return sigma_shot / std::sqrt(kappa * tau);
}

StatisticsReport make_statistics(const DensityMatrix& rho, const ModelParams& p) {
    StatisticsReport r;
    r.p_a = photon_distribution(rho, Mode::A);
    r.p_b = photon_distribution(rho, Mode::B);
    const int local = rho.space.local_dim();
    for (int k = 0; k < local; ++k) {
        r.mean_a += k * r.p_a[k];
        r.mean_b += k * r.p_b[k];
    }
    r.mean_delta_n = r.mean_a - r.mean_b;
    r.var_delta_n = variance_delta_n(rho);
    r.sigma_shot = std::sqrt(std::max(0.0, r.var_delta_n));
    r.kappa = p.kappa;
    return r;
}

// ---------------------------------------------------------------------------
// SNR map
// ---------------------------------------------------------------------------

SnrMap snr_map(const ModelParams& p, FockSpace space,
               const std::vector<double>& tau_values,
               const std::vector<double>& noise_values, NoiseKind kind,
               int threads) {
    SnrMap map;
    map.kind = kind;
    map.tau_values = tau_values;
    map.noise_values = noise_values;
    const std::size_t nt = tau_values.size(), nn = noise_values.size();
    map.snr.assign(nt * nn, std::numeric_limits<double>::quiet_NaN());
    map.flagged.assign(nt * nn, 0);

    std::vector<double> signal(nn, 0.0), shot(nn, 0.0);
    std::vector<std::uint8_t> failed(nn, 0);
    detail::parallel_for(nn, threads, [&](std::size_t jn) {
        ModelParams q = p;
        if (kind == NoiseKind::Thermal)
            q.n_th = noise_values[jn];
        else
            q.gamma_phi = noise_values[jn];
        try {
            DensityMatrix rho_sig = steady_state(liouvillian(q, space));
            StatisticsReport sig = make_statistics(rho_sig, q);
            ModelParams q0 = q;
            q0.j_im = 0.0;
            DensityMatrix rho_null = steady_state(liouvillian(q0, space));
            StatisticsReport null = make_statistics(rho_null, q0);
            signal[jn] = std::abs(sig.mean_delta_n - null.mean_delta_n);
            shot[jn] = sig.sigma_shot;
        } catch (const SingularSolve&) {
            failed[jn] = 1;
        }
    });

    for (std::size_t it = 0; it < nt; ++it)
        for (std::size_t jn = 0; jn < nn; ++jn) {
            const std::size_t cell = it * nn + jn;
            if (failed[jn]) {
                map.flagged[cell] = 1;
                continue;
            }
            map.snr[cell] =
                signal[jn] / sem_sigma(shot[jn], p.kappa, tau_values[it]);
        }
    return map;
}

// ---------------------------------------------------------------------------
// Undriven spectrum (fixed total-photon sector)
// ---------------------------------------------------------------------------

namespace {

double sector_diagonal(const ModelParams& p, double omega0, int n_total, int k) {
    const int na = k, nb = n_total - k;
    return omega0 * n_total + p.epsilon * (na - nb) +
           0.5 * p.u_a * na * (na - 1) + 0.5 * p.u_b * nb * (nb - 1) +
           p.v * na * nb;
}

} // namespace

std::vector<std::pair<double, std::vector<double>>>
undriven_spectrum(const ModelParams& p, const std::vector<double>& v_values,
                  int n_total) {
    // The undriven Hamiltonian conserves n_a + n_b, so the lab-frame spectrum
    // restricted to one sector is an (n_total+1)-dimensional Hermitian
    // tridiagonal eigenproblem. An unset carrier frequency contributes 0.
    const double omega0 = std::isfinite(p.omega0) ? p.omega0 : 0.0;
    const int m = n_total + 1;
    std::vector<std::pair<double, std::vector<double>>> out;
    out.reserve(v_values.size());
    for (double v : v_values) {
        ModelParams q = p;
        q.v = v;
        Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(m, m);
        for (int k = 0; k < m; ++k) {
            h(k, k) = sector_diagonal(q, omega0, n_total, k);
            if (k + 1 < m) {
                const double amp = std::sqrt(double(k + 1) * double(n_total - k));
                h(k + 1, k) = -std::conj(q.j()) * amp;
                h(k, k + 1) = -q.j() * amp;
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
            h, Eigen::EigenvaluesOnly);
        std::vector<double> eigs(solver.eigenvalues().data(),
                                 solver.eigenvalues().data() + m);
        out.emplace_back(v, std::move(eigs));
    }
    return out;
}

std::vector<std::pair<double, std::vector<double>>>
undriven_spectrum_mean_field(const ModelParams& p,
                             const std::vector<double>& v_values, int n_total) {
    const double omega0 = std::isfinite(p.omega0) ? p.omega0 : 0.0;
    const int m = n_total + 1;
    std::vector<std::pair<double, std::vector<double>>> out;
    out.reserve(v_values.size());
    for (double v : v_values) {
        ModelParams q = p;
        q.v = v;
        std::vector<double> eigs(m);
        for (int k = 0; k < m; ++k)
            eigs[k] = sector_diagonal(q, omega0, n_total, k);
        std::sort(eigs.begin(), eigs.end());
        out.emplace_back(v, std::move(eigs));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Binary density-matrix I/O
// ---------------------------------------------------------------------------

static_assert(std::endian::native == std::endian::little,
              "density-matrix binary layout assumes a little-endian host");
static_assert(sizeof(double) == 8, "binary layout assumes 64-bit doubles");

void write_density_matrix(const std::string& path, const DensityMatrix& rho) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    const std::uint64_t dim = rho.entries.rows();
    out.write(reinterpret_cast<const char*>(&dim), sizeof(dim));
    for (std::uint64_t i = 0; i < dim; ++i)
        for (std::uint64_t j = 0; j < dim; ++j) {
            const cplx z = rho.entries(i, j);
            const double re = z.real(), im = z.imag();
            out.write(reinterpret_cast<const char*>(&re), sizeof(re));
            out.write(reinterpret_cast<const char*>(&im), sizeof(im));
        }
    if (!out) throw std::runtime_error("short write: " + path);
}

DensityMatrix read_density_matrix(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::uint64_t dim = 0;
    in.read(reinterpret_cast<char*>(&dim), sizeof(dim));
    const auto local = static_cast<std::uint64_t>(std::llround(
        std::sqrt(static_cast<double>(dim))));
    if (!in || dim == 0 || local * local != dim)
        throw std::runtime_error("invalid density-matrix header in " + path);
    DensityMatrix rho;
    rho.space.n_max = static_cast<int>(local) - 1;
    rho.entries.resize(dim, dim);
    for (std::uint64_t i = 0; i < dim; ++i)
        for (std::uint64_t j = 0; j < dim; ++j) {
            double re = 0.0, im = 0.0;
            in.read(reinterpret_cast<char*>(&re), sizeof(re));
            in.read(reinterpret_cast<char*>(&im), sizeof(im));
            rho.entries(i, j) = cplx(re, im);
        }
    if (!in) throw std::runtime_error("truncated density-matrix file: " + path);
    return rho;
}

} // namespace kerr_ring
