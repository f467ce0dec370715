#include "kerr_ring/stability.hpp"

#include <cmath>

#include "kerr_ring/detail/continuation.hpp"
#include "kerr_ring/detail/parallel.hpp"
#include "kerr_ring/rng.hpp"

namespace kerr_ring {

namespace {
constexpr double kMarginalTol = 1e-9;
const cplx kI{0.0, 1.0};
} // namespace

DriftMatrix drift_matrix(const SemiclassicalState& s, const ModelParams& p) {
    const double eps = p.epsilon_eff();
    const cplx a = s.alpha, b = s.beta;
    const double na = s.n_alpha(), nb = s.n_beta();
    const cplx j = p.j();
    const double hg = 0.5 * p.gamma;

    const double dt_a = p.delta + eps + 2.0 * p.u_a * na + p.v * nb;
    const double dt_b = p.delta - eps + 2.0 * p.u_b * nb + p.v * na;

    Eigen::Matrix2cd P, Q;
    P << -kI * dt_a - hg, -kI * (p.v * a * std::conj(b) - std::conj(j)),
        -kI * (p.v * std::conj(a) * b - j), -kI * dt_b - hg;
    Q << -kI * (p.u_a * a * a), -kI * (p.v * a * b),
        -kI * (p.v * a * b), -kI * (p.u_b * b * b);

    DriftMatrix m;
    m.entries.block<2, 2>(0, 0) = P;
    m.entries.block<2, 2>(0, 2) = Q;
    m.entries.block<2, 2>(2, 0) = Q.conjugate();
    m.entries.block<2, 2>(2, 2) = P.conjugate();
    return m;
}

DriftMatrix drift_matrix(const FixedPoint& fp, const ModelParams& p) {
    return drift_matrix(fp.state, p);
}

Stability classify(const DriftMatrix& m) {
    Eigen::ComplexEigenSolver<Eigen::Matrix4cd> solver(m.entries, false);
    double max_re = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < 4; ++i)
        max_re = std::max(max_re, solver.eigenvalues()[i].real());
    if (max_re < -kMarginalTol) return Stability::Stable;
    if (max_re > kMarginalTol) return Stability::Unstable;
    return Stability::Marginal;
}

SolutionCountMap solution_count_map(const ModelParams& p,
                                    SolutionCountMap::Axis axis,
                                    const std::vector<double>& x_values,
                                    const std::vector<double>& f_values,
                                    int n_starts, std::uint64_t seed, int threads) {
    SolutionCountMap map;
    map.axis = axis;
    map.x_values = x_values;
    map.f_values = f_values;
    const std::size_t nx = x_values.size(), nf = f_values.size();
    map.count_total.assign(nx * nf, 0);
    map.count_stable.assign(nx * nf, 0);
    map.flagged.assign(nx * nf, 0);

    detail::parallel_for(nx * nf, threads, [&](std::size_t cell) {
        const std::size_t ix = cell / nf, jf = cell % nf;
        ModelParams q = p;
        if (axis == SolutionCountMap::Axis::Delta)
            q.delta = x_values[ix];
        else
            q.epsilon = x_values[ix];
        q.f_a = q.f_b = f_values[jf];
        auto sols = find_steady_states(q, n_starts, substream(seed, cell));
        int stable = 0;
        for (const auto& fp : sols)
            if (fp.stability == Stability::Stable) ++stable;
        map.count_total[cell] = static_cast<int>(sols.size());
        map.count_stable[cell] = stable;
        map.flagged[cell] = sols.empty() ? 1 : 0;
    });
    return map;
}

std::vector<std::pair<double, std::vector<FixedPoint>>>
trsb_response(const ModelParams& p, const std::vector<double>& imj_values,
              double f_in, int n_starts, std::uint64_t seed, int threads) {
    auto params_at = [&p, f_in](double imj) {
        ModelParams q = p;
        q.j_im = imj;
        q.f_a = q.f_b = f_in;
        return q;
    };
    return detail::swept_fixed_points(params_at, imj_values, n_starts, seed,
                                      threads);
}

} // namespace kerr_ring
