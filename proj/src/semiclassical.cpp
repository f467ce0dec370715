#include "kerr_ring/semiclassical.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <Eigen/Dense>
#include <boost/numeric/odeint.hpp>

#include "kerr_ring/detail/continuation.hpp"
#include "kerr_ring/detail/parallel.hpp"
#include "kerr_ring/errors.hpp"
#include "kerr_ring/rng.hpp"
#include "kerr_ring/stability.hpp"

namespace kerr_ring {

namespace {

constexpr double kNewtonTol = 1e-12;
constexpr int kNewtonMaxIter = 200;
constexpr double kDedupRadius = 1e-6;
constexpr double kStateEqRelTol = 1e-8;
constexpr double kStartAmplitudeMax = 4.0;

const cplx kI{0.0, 1.0};

struct EffectiveCoeffs {
    double delta_a, delta_b;  // Delta +/- eps_eff
    cplx j;
    double half_gamma;
    double sqrt_kappa;
};

EffectiveCoeffs coeffs(const ModelParams& p) {
    double eps = p.epsilon_eff();
    return {p.delta + eps, p.delta - eps, p.j(), 0.5 * p.gamma, std::sqrt(p.kappa)};
}

} // namespace

SemiclassicalState eom_rhs(const SemiclassicalState& s, const ModelParams& p) {
    const EffectiveCoeffs c = coeffs(p);
    const double na = s.n_alpha(), nb = s.n_beta();
    SemiclassicalState d;
    d.alpha = (-kI * (c.delta_a + p.u_a * na + p.v * nb) - c.half_gamma) * s.alpha +
              kI * std::conj(c.j) * s.beta + c.sqrt_kappa * p.f_a;
    d.beta = (-kI * (c.delta_b + p.u_b * nb + p.v * na) - c.half_gamma) * s.beta +
             kI * c.j * s.alpha + c.sqrt_kappa * p.f_b;
    return d;
}

double steady_state_residual(const SemiclassicalState& s, const ModelParams& p) {
    SemiclassicalState d = eom_rhs(s, p);
    return std::sqrt(std::norm(d.alpha) + std::norm(d.beta));
}

Trajectory integrate(const SemiclassicalState& s0, const ModelParams& p,
                     double t_end, double tol) {
    namespace ode = boost::numeric::odeint;
    using state_type = std::array<double, 4>;

    auto system = [&p](const state_type& x, state_type& dxdt, double /*t*/) {
        SemiclassicalState s{{x[0], x[1]}, {x[2], x[3]}};
        SemiclassicalState d = eom_rhs(s, p);
        dxdt = {d.alpha.real(), d.alpha.imag(), d.beta.real(), d.beta.imag()};
    };

    Trajectory traj;
    auto observer = [&traj](const state_type& x, double t) {
        traj.times.push_back(t);
        traj.states.push_back({{x[0], x[1]}, {x[2], x[3]}});
    };

    state_type x{s0.alpha.real(), s0.alpha.imag(), s0.beta.real(), s0.beta.imag()};
    auto stepper = ode::make_controlled<ode::runge_kutta_dopri5<state_type>>(tol, tol);
    try {
        ode::integrate_adaptive(stepper, system, x, 0.0, t_end,
                                std::min(0.01, t_end / 10.0), observer);
    } catch (const ode::odeint_error& e) {
        throw StepSizeUnderflow(std::string("adaptive step control stalled: ") +
                                e.what());
    }
    traj.final_residual = steady_state_residual(traj.states.back(), p);
    return traj;
}

double asymmetry_ratio(const SemiclassicalState& s) {
    const double na = s.n_alpha(), nb = s.n_beta();
    const double total = na + nb;
    if (total == 0.0)
        throw DegenerateState("asymmetry ratio undefined: both populations zero");
    return (na - nb) / total;
}

// ---------------------------------------------------------------------------
// Multistart Newton steady-state finder
// ---------------------------------------------------------------------------

namespace {

using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;

Vec4 pack_residual(const SemiclassicalState& s, const ModelParams& p) {
    SemiclassicalState d = eom_rhs(s, p);
    return {d.alpha.real(), d.alpha.imag(), d.beta.real(), d.beta.imag()};
}

// Real Jacobian of the packed residual, from the Wirtinger derivatives of the
// equations of motion: d/dx = d/dz + d/dz*, d/dy = i (d/dz - d/dz*).
Mat4 real_jacobian(const SemiclassicalState& s, const ModelParams& p) {
    const EffectiveCoeffs c = coeffs(p);
    const cplx a = s.alpha, b = s.beta;
    const double na = s.n_alpha(), nb = s.n_beta();

    const cplx P00 = -kI * (c.delta_a + 2.0 * p.u_a * na + p.v * nb) - c.half_gamma;
    const cplx P01 = -kI * (p.v * a * std::conj(b) - std::conj(c.j));
    const cplx P10 = -kI * (p.v * std::conj(a) * b - c.j);
    const cplx P11 = -kI * (c.delta_b + 2.0 * p.u_b * nb + p.v * na) - c.half_gamma;
    const cplx Q00 = -kI * (p.u_a * a * a);
    const cplx Q01 = -kI * (p.v * a * b);
    const cplx Q10 = Q01;
    const cplx Q11 = -kI * (p.u_b * b * b);

    Mat4 J;
    auto fill = [&J](int row, cplx dda, cplx ddai, cplx ddb, cplx ddbi) {
        J(row, 0) = dda.real();
        J(row, 1) = ddai.real();
        J(row, 2) = ddb.real();
        J(row, 3) = ddbi.real();
        J(row + 1, 0) = dda.imag();
        J(row + 1, 1) = ddai.imag();
        J(row + 1, 2) = ddb.imag();
        J(row + 1, 3) = ddbi.imag();
    };
    fill(0, P00 + Q00, kI * (P00 - Q00), P01 + Q01, kI * (P01 - Q01));
    fill(2, P10 + Q10, kI * (P10 - Q10), P11 + Q11, kI * (P11 - Q11));
    return J;
}

// Steady-state photon-number ("state") equations: taking |.|^2 of the
// stationarity conditions eliminates the drive phase,
//   kappa f_a^2 = (M_a^2 + g^2/4) n_a + |J|^2 n_b - 2 Re[(M_a - i g/2) J a b*]
//   kappa f_b^2 = (M_b^2 + g^2/4) n_b + |J|^2 n_a - 2 Re[(M_b - i g/2) J* b a*]
// with M_a = Delta + eps + u_a n_a + v n_b, M_b = Delta - eps + u_b n_b + v n_a.
bool satisfies_state_equations(const SemiclassicalState& s, const ModelParams& p) {
    const EffectiveCoeffs c = coeffs(p);
    const double na = s.n_alpha(), nb = s.n_beta();
    const double ma = c.delta_a + p.u_a * na + p.v * nb;
    const double mb = c.delta_b + p.u_b * nb + p.v * na;
    const double j2 = std::norm(c.j);
    const double g2 = c.half_gamma;

    const double lhs_a = p.kappa * p.f_a * p.f_a;
    const double rhs_a = (ma * ma + g2 * g2) * na + j2 * nb -
                         2.0 * std::real((ma - kI * g2) * c.j * s.alpha *
                                         std::conj(s.beta));
    const double lhs_b = p.kappa * p.f_b * p.f_b;
    const double rhs_b = (mb * mb + g2 * g2) * nb + j2 * na -
                         2.0 * std::real((mb - kI * g2) * std::conj(c.j) * s.beta *
                                         std::conj(s.alpha));

    auto rel_ok = [](double lhs, double rhs) {
        double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
        return std::abs(lhs - rhs) <= kStateEqRelTol * scale;
    };
    return rel_ok(lhs_a, rhs_a) && rel_ok(lhs_b, rhs_b);
}

} // namespace

namespace detail {

std::optional<FixedPoint> newton_polish(const SemiclassicalState& start,
                                        const ModelParams& p) {
    Vec4 x{start.alpha.real(), start.alpha.imag(), start.beta.real(),
           start.beta.imag()};
    auto unpack = [](const Vec4& v) {
        return SemiclassicalState{{v[0], v[1]}, {v[2], v[3]}};
    };

    Vec4 f = pack_residual(unpack(x), p);
    double fnorm = f.norm();
    for (int it = 0; it < kNewtonMaxIter && fnorm > kNewtonTol; ++it) {
        Mat4 J = real_jacobian(unpack(x), p);
        Vec4 dx = J.partialPivLu().solve(-f);
        if (!dx.allFinite()) return std::nullopt;
        double lambda = 1.0;
        Vec4 x_new;
        Vec4 f_new;
        double fnorm_new = std::numeric_limits<double>::infinity();
        for (int cut = 0; cut < 12; ++cut) {
            x_new = x + lambda * dx;
            f_new = pack_residual(unpack(x_new), p);
            fnorm_new = f_new.norm();
            if (std::isfinite(fnorm_new) && fnorm_new < fnorm * (1.0 - 1e-4 * lambda))
                break;
            lambda *= 0.5;
        }
        if (!(fnorm_new < fnorm)) return std::nullopt;  // stagnated
        x = x_new;
        f = f_new;
        fnorm = fnorm_new;
        if (x.norm() > 1e8) return std::nullopt;  // diverged
    }
    if (!(fnorm <= kNewtonTol)) return std::nullopt;

    FixedPoint fp;
    fp.state = unpack(x);
    fp.residual_norm = fnorm;
    fp.f_in = p.f_a;
    if (!satisfies_state_equations(fp.state, p)) return std::nullopt;
    fp.stability = classify(drift_matrix(fp.state, p));
    return fp;
}

} // namespace detail

namespace {

double fp_distance(const FixedPoint& a, const FixedPoint& b) {
    return std::sqrt(std::norm(a.state.alpha - b.state.alpha) +
                     std::norm(a.state.beta - b.state.beta));
}

void add_if_new(std::vector<FixedPoint>& sols, const FixedPoint& fp) {
    for (const auto& s : sols)
        if (fp_distance(s, fp) < kDedupRadius) return;
    sols.push_back(fp);
}

void sort_fixed_points(std::vector<FixedPoint>& sols) {
    std::sort(sols.begin(), sols.end(), [](const FixedPoint& a, const FixedPoint& b) {
        double ta = a.state.n_alpha() + a.state.n_beta();
        double tb = b.state.n_alpha() + b.state.n_beta();
        if (ta != tb) return ta < tb;
        if (a.state.n_alpha() != b.state.n_alpha())
            return a.state.n_alpha() < b.state.n_alpha();
        if (a.state.alpha.real() != b.state.alpha.real())
            return a.state.alpha.real() < b.state.alpha.real();
        return a.state.alpha.imag() < b.state.alpha.imag();
    });
}

} // namespace

std::vector<FixedPoint> find_steady_states(const ModelParams& p, int n_starts,
                                           std::uint64_t seed) {
    std::vector<FixedPoint> sols;
    const EffectiveCoeffs c = coeffs(p);

    // Population scale for the response-seeded starts.  The state equations
    // bound the populations by sqrt(n) <= sqrt(kappa) f / (gamma/2 - |J|)
    // when the exchange is weak; clamp the denominator so a strong exchange
    // merely loosens the box instead of breaking it.
    const double f_max = std::max(std::abs(p.f_a), std::abs(p.f_b));
    const double resp_width =
        std::max(0.5 * p.gamma - std::abs(c.j), 0.25 * p.gamma);
    const double pop_max = std::clamp(
        1.1 * p.kappa * f_max * f_max / (resp_width * resp_width), 1.0, 64.0);
    const int n_resp = n_starts / 2;
    const int grid_cols =
        std::max(1, static_cast<int>(std::ceil(std::sqrt(double(n_resp)))));
    const int grid_rows = std::max(1, (n_resp + grid_cols - 1) / grid_cols);

    for (int k = 0; k < n_starts; ++k) {
        SplitMix64 rng(substream(seed, static_cast<std::uint64_t>(k)));
        SemiclassicalState start;
        if (k % 2 == 0) {
            const double ra = rng.uniform(0.0, kStartAmplitudeMax);
            const double ta = rng.uniform(0.0, 2.0 * M_PI);
            const double rb = rng.uniform(0.0, kStartAmplitudeMax);
            const double tb = rng.uniform(0.0, 2.0 * M_PI);
            start = {std::polar(ra, ta), std::polar(rb, tb)};
        } else {
            // Seed from the Kerr-shifted linear response at stratified
            // populations, alpha = sqrt(kappa) f_a / (i M_a + gamma/2) with
            // M_a = Delta_a + u_a n_a + v n_b.  When the cell populations
            // approximate a branch, the response lands inside its Newton
            // basin (exactly on it for decoupled modes); at zero drive the
            // start collapses to the origin.  The jittered grid guarantees
            // small saddle basins are sampled even with few starts, while
            // the pure-phase starts above cover states the single-mode
            // response cannot reach.
            const int cell = (k - 1) / 2;
            const double na = (cell % grid_cols + rng.uniform(0.0, 1.0)) /
                              grid_cols * pop_max;
            const double nb = (cell / grid_cols + rng.uniform(0.0, 1.0)) /
                              grid_rows * pop_max;
            const cplx da{c.half_gamma, c.delta_a + p.u_a * na + p.v * nb};
            const cplx db{c.half_gamma, c.delta_b + p.u_b * nb + p.v * na};
            start = {c.sqrt_kappa * p.f_a / da, c.sqrt_kappa * p.f_b / db};
        }
        if (auto fp = detail::newton_polish(start, p)) add_if_new(sols, *fp);
    }
    sort_fixed_points(sols);
    return sols;
}

namespace detail {

std::vector<std::pair<double, std::vector<FixedPoint>>>
swept_fixed_points(const std::function<ModelParams(double)>& params_at,
                   const std::vector<double>& values, int n_starts,
                   std::uint64_t seed, int threads) {
    std::vector<std::pair<double, std::vector<FixedPoint>>> out(values.size());
    parallel_for(values.size(), threads, [&](std::size_t i) {
        out[i] = {values[i],
                  find_steady_states(params_at(values[i]), n_starts,
                                     substream(seed, i))};
    });
    // Continuation polish: warm-start from the neighbours so branches are
    // followed through turning points the random starts may have missed.
    auto polish_from = [&](std::size_t i, std::size_t src) {
        ModelParams p = params_at(values[i]);
        for (const auto& fp : out[src].second)
            if (auto refined = newton_polish(fp.state, p))
                add_if_new(out[i].second, *refined);
    };
    for (std::size_t i = 1; i < values.size(); ++i) polish_from(i, i - 1);
    for (std::size_t i = values.size(); i-- > 1;) polish_from(i - 1, i);
    for (auto& entry : out) sort_fixed_points(entry.second);
    return out;
}

} // namespace detail

std::vector<std::pair<double, std::vector<FixedPoint>>>
sweep_drive(const ModelParams& p, const std::vector<double>& f_values, int n_starts,
            std::uint64_t seed, int threads) {
    auto params_at = [&p](double f) {
        ModelParams q = p;
        q.f_a = q.f_b = f;
        return q;
    };
    return detail::swept_fixed_points(params_at, f_values, n_starts, seed, threads);
}

} // namespace kerr_ring
