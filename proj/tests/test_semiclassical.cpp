#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "kerr_ring/errors.hpp"
#include "kerr_ring/rng.hpp"
#include "kerr_ring/semiclassical.hpp"

using namespace kerr_ring;

namespace {

ModelParams fig_params() {
    ModelParams p;
    p.delta = -3.5;
    p.epsilon = 0.0;
    p.u_a = p.u_b = 0.6;
    p.v = 0.0;
    p.j_re = 0.1;
    p.j_im = 0.0;
    p.kappa = 1.0;
    p.gamma = 2.0;
    return p;
}

// Real positive roots of the single-mode steady-state cubic
//   kappa F^2 = n ((Delta + U n)^2 + gamma^2/4),
// located independently of the production solver by sign-change bisection.
std::vector<double> single_mode_cubic_roots(double delta, double u, double gamma,
                                            double kappa, double f) {
    auto poly = [&](double n) {
        const double m = delta + u * n;
        return n * (m * m + 0.25 * gamma * gamma) - kappa * f * f;
    };
    std::vector<double> roots;
    const double hi = 40.0;
    const int cells = 400000;
    double prev_n = 0.0, prev_v = poly(0.0);
    for (int i = 1; i <= cells; ++i) {
        const double n = hi * static_cast<double>(i) / cells;
        const double v = poly(n);
        if (prev_v == 0.0) roots.push_back(prev_n);
        if (prev_v * v < 0.0) {
            double lo = prev_n, up = n;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + up);
                if (poly(lo) * poly(mid) <= 0.0)
                    up = mid;
                else
                    lo = mid;
            }
            roots.push_back(0.5 * (lo + up));
        }
        prev_n = n;
        prev_v = v;
    }
    return roots;
}

double set_distance(const SemiclassicalState& s,
                    const std::vector<FixedPoint>& set) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& fp : set) {
        const double d = std::sqrt(std::norm(fp.state.alpha - s.alpha) +
                                   std::norm(fp.state.beta - s.beta));
        best = std::min(best, d);
    }
    return best;
}

} // namespace

TEST_CASE("eom_rhs: origin and drive-only terms") {
    ModelParams p = fig_params();
    SemiclassicalState origin;
    SemiclassicalState d = eom_rhs(origin, p);
    CHECK(d.alpha == cplx(0.0, 0.0));
    CHECK(d.beta == cplx(0.0, 0.0));

    p.f_a = p.f_b = 1.7;
    p.kappa = 4.0;
    d = eom_rhs(origin, p);
    CHECK(d.alpha.real() == doctest::Approx(2.0 * 1.7).epsilon(1e-15));
    CHECK(d.alpha.imag() == 0.0);
    CHECK(d.beta.real() == doctest::Approx(2.0 * 1.7).epsilon(1e-15));
}

TEST_CASE("eom_rhs: hand-evaluated reference point") {
    ModelParams p = fig_params();
    p.v = 0.1;
    SemiclassicalState s{{1.0, 0.0}, {0.0, 0.0}};
    SemiclassicalState d = eom_rhs(s, p);
    // dalpha = (-i(-3.5 + 0.6) - 1) * 1 = -1 + 2.9i ; dbeta = i*J*alpha = 0.1i
    CHECK(d.alpha.real() == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(d.alpha.imag() == doctest::Approx(2.9).epsilon(1e-14));
    CHECK(d.beta.real() == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(d.beta.imag() == doctest::Approx(0.1).epsilon(1e-14));
}

TEST_CASE("eom_rhs: conjugate-pair consistency on random states") {
    // The conjugate equations of motion (the B2/B4 pair), written out
    // independently here, must equal the conjugate of eom_rhs.
    SplitMix64 rng(12345);
    for (int trial = 0; trial < 50; ++trial) {
        ModelParams p = fig_params();
        p.epsilon = rng.uniform(-1.0, 1.0);
        p.v = rng.uniform(0.0, 0.5);
        p.j_im = rng.uniform(-0.5, 0.5);
        p.f_a = rng.uniform(0.0, 3.0);
        p.f_b = rng.uniform(0.0, 3.0);
        SemiclassicalState s{{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)},
                             {rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)}};

        const cplx i{0.0, 1.0};
        const double na = s.n_alpha(), nb = s.n_beta();
        const cplx dac = (i * (p.delta + p.epsilon + p.u_a * na + p.v * nb) -
                          0.5 * p.gamma) *
                             std::conj(s.alpha) -
                         i * p.j() * std::conj(s.beta) +
                         std::sqrt(p.kappa) * p.f_a;
        const cplx dbc = (i * (p.delta - p.epsilon + p.u_b * nb + p.v * na) -
                          0.5 * p.gamma) *
                             std::conj(s.beta) -
                         i * std::conj(p.j()) * std::conj(s.alpha) +
                         std::sqrt(p.kappa) * p.f_b;

        SemiclassicalState d = eom_rhs(s, p);
        CHECK(std::abs(std::conj(d.alpha) - dac) < 1e-12);
        CHECK(std::abs(std::conj(d.beta) - dbc) < 1e-12);
    }
}

TEST_CASE("eom_rhs: main_text convention doubles the splitting") {
    ModelParams p = fig_params();
    p.epsilon = 0.3;
    SemiclassicalState s{{0.7, -0.4}, {0.2, 0.9}};

    ModelParams doubled = p;
    doubled.epsilon = 0.6;
    ModelParams main_text = p;
    main_text.eom_convention = EomConvention::MainText;

    SemiclassicalState lhs = eom_rhs(s, main_text);
    SemiclassicalState rhs = eom_rhs(s, doubled);
    CHECK(std::abs(lhs.alpha - rhs.alpha) == 0.0);
    CHECK(std::abs(lhs.beta - rhs.beta) == 0.0);
}

TEST_CASE("steady_state_residual: origin cases") {
    ModelParams p = fig_params();
    SemiclassicalState origin;
    CHECK(steady_state_residual(origin, p) == 0.0);

    p.f_a = p.f_b = 1.0;
    p.kappa = 1.0;
    CHECK(steady_state_residual(origin, p) ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("integrate: undriven decay empties both modes") {
    ModelParams p = fig_params();
    p.v = 0.1;
    SemiclassicalState s0{{std::sqrt(6.0), 0.0}, {0.0, 0.0}};
    Trajectory traj = integrate(s0, p, 20.0, 1e-10);

    REQUIRE(traj.times.size() == traj.states.size());
    REQUIRE(traj.times.size() >= 2);
    CHECK(traj.times.front() == 0.0);
    CHECK(traj.times.back() == doctest::Approx(20.0).epsilon(1e-12));
    for (std::size_t i = 1; i < traj.times.size(); ++i)
        CHECK(traj.times[i] > traj.times[i - 1]);

    const SemiclassicalState& last = traj.states.back();
    CHECK(last.n_alpha() + last.n_beta() < 1e-10);
}

TEST_CASE("integrate: undriven total population follows the decay law") {
    // All Hamiltonian terms conserve |alpha|^2 + |beta|^2; with F=0 the only
    // population change is the gamma damping, so n_tot(t) = n_tot(0) e^{-g t}.
    ModelParams p = fig_params();
    p.v = 0.2;
    p.epsilon = 0.4;
    p.j_im = 0.3;
    SemiclassicalState s0{{1.2, -0.3}, {0.5, 0.8}};
    const double n0 = s0.n_alpha() + s0.n_beta();

    Trajectory traj = integrate(s0, p, 3.0, 1e-12);
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const double expected = n0 * std::exp(-p.gamma * traj.times[i]);
        const double got = traj.states[i].n_alpha() + traj.states[i].n_beta();
        CHECK(got == doctest::Approx(expected).epsilon(1e-6));
    }
}

TEST_CASE("integrate: cross-Kerr collapses the population imbalance") {
    ModelParams p = fig_params();
    p.f_a = p.f_b = 2.7;
    SemiclassicalState s0{{std::sqrt(6.0), 0.0}, {0.0, 0.0}};

    SUBCASE("V = 0 keeps the modes asymmetric") {
        Trajectory traj = integrate(s0, p, 50.0, 1e-10);
        CHECK(traj.final_residual < 1e-6);
        CHECK(std::abs(asymmetry_ratio(traj.states.back())) > 0.2);
    }
    SUBCASE("V = 0.1 drives a symmetric configuration") {
        p.v = 0.1;
        Trajectory traj = integrate(s0, p, 50.0, 1e-10);
        CHECK(traj.final_residual < 1e-6);
        CHECK(std::abs(asymmetry_ratio(traj.states.back())) < 0.05);
    }
}

TEST_CASE("integrate: determinism") {
    ModelParams p = fig_params();
    p.v = 0.1;
    p.f_a = p.f_b = 2.7;
    SemiclassicalState s0{{std::sqrt(6.0), 0.0}, {0.0, 0.0}};
    Trajectory a = integrate(s0, p, 10.0, 1e-10);
    Trajectory b = integrate(s0, p, 10.0, 1e-10);
    REQUIRE(a.times.size() == b.times.size());
    for (std::size_t i = 0; i < a.times.size(); ++i) {
        CHECK(a.times[i] == b.times[i]);
        CHECK(a.states[i].alpha == b.states[i].alpha);
        CHECK(a.states[i].beta == b.states[i].beta);
    }
}

TEST_CASE("find_steady_states: undriven system has only the origin") {
    ModelParams p = fig_params();
    p.v = 0.1;
    std::vector<FixedPoint> sols = find_steady_states(p, 32, 42);
    REQUIRE(sols.size() == 1);
    CHECK(std::abs(sols[0].state.alpha) < 1e-10);
    CHECK(std::abs(sols[0].state.beta) < 1e-10);
    CHECK(sols[0].stability == Stability::Stable);
    CHECK(sols[0].residual_norm <= 1e-10);
    CHECK(sols[0].f_in == 0.0);
}

TEST_CASE("find_steady_states: decoupled modes reproduce the cubic roots") {
    // J = 0, V = 0: the modes decouple and every two-mode solution is a
    // Cartesian product of single-mode roots of kF^2 = n((D+Un)^2 + g^2/4).
    ModelParams p = fig_params();
    p.j_re = 0.0;
    p.v = 0.0;
    p.f_a = p.f_b = 2.7;

    std::vector<double> roots =
        single_mode_cubic_roots(p.delta, p.u_a, p.gamma, p.kappa, 2.7);
    REQUIRE(roots.size() == 3);  // 2.7 sits inside the bistable window

    std::vector<FixedPoint> sols = find_steady_states(p, 160, 7);
    CHECK(sols.size() == 9);

    // Every solution's populations match cubic roots...
    for (const auto& fp : sols) {
        double da = 1e9, db = 1e9;
        for (double r : roots) {
            da = std::min(da, std::abs(fp.state.n_alpha() - r));
            db = std::min(db, std::abs(fp.state.n_beta() - r));
        }
        CHECK(da < 1e-8);
        CHECK(db < 1e-8);
        CHECK(fp.residual_norm <= 1e-10);
    }
    // ...and every product combination is present.
    int found = 0;
    for (double ra : roots)
        for (double rb : roots)
            for (const auto& fp : sols)
                if (std::abs(fp.state.n_alpha() - ra) < 1e-6 &&
                    std::abs(fp.state.n_beta() - rb) < 1e-6) {
                    ++found;
                    break;
                }
    CHECK(found == 9);

    // Middle root is the unstable branch: stable iff neither mode sits on it.
    int stable = 0;
    for (const auto& fp : sols)
        if (fp.stability == Stability::Stable) ++stable;
    CHECK(stable == 4);
}

TEST_CASE("find_steady_states: multistable window and swap symmetry") {
    ModelParams p = fig_params();
    p.v = 0.1;
    p.f_a = p.f_b = 2.9;

    std::vector<FixedPoint> sols = find_steady_states(p, 64, 3);
    int stable = 0;
    for (const auto& fp : sols) {
        if (fp.stability == Stability::Stable) ++stable;
        CHECK(fp.residual_norm <= 1e-10);
        CHECK(fp.f_in == 2.9);
    }
    CHECK(stable >= 2);

    // Im[J]=0, eps=0, u_a=u_b, f_a=f_b: set-level alpha <-> beta symmetry.
    for (const auto& fp : sols) {
        SemiclassicalState swapped{fp.state.beta, fp.state.alpha};
        CHECK(set_distance(swapped, sols) < 1e-6);
    }

    // Deduplication: no two solutions closer than the advertised radius.
    for (std::size_t i = 0; i < sols.size(); ++i)
        for (std::size_t j = i + 1; j < sols.size(); ++j) {
            const double d =
                std::sqrt(std::norm(sols[i].state.alpha - sols[j].state.alpha) +
                          std::norm(sols[i].state.beta - sols[j].state.beta));
            CHECK(d >= 1e-6);
        }
}

TEST_CASE("find_steady_states: deterministic in seed") {
    ModelParams p = fig_params();
    p.v = 0.1;
    p.j_im = 0.1;
    p.f_a = p.f_b = 3.0;
    std::vector<FixedPoint> a = find_steady_states(p, 48, 11);
    std::vector<FixedPoint> b = find_steady_states(p, 48, 11);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].state.alpha == b[i].state.alpha);
        CHECK(a[i].state.beta == b[i].state.beta);
        CHECK(a[i].stability == b[i].stability);
    }
}

TEST_CASE("sweep_drive: single zero drive entry") {
    ModelParams p = fig_params();
    p.v = 0.1;
    auto swept = sweep_drive(p, {0.0}, 16, 5);
    REQUIRE(swept.size() == 1);
    CHECK(swept[0].first == 0.0);
    REQUIRE(swept[0].second.size() == 1);
    CHECK(std::abs(swept[0].second[0].state.alpha) < 1e-10);
}

TEST_CASE("sweep_drive: solution count rises and falls across the window") {
    ModelParams p = fig_params();
    p.v = 0.1;
    std::vector<double> fs;
    for (int i = 0; i <= 25; ++i) fs.push_back(5.0 * i / 25.0);
    auto swept = sweep_drive(p, fs, 32, 9);
    REQUIRE(swept.size() == fs.size());
    for (std::size_t i = 0; i < fs.size(); ++i) CHECK(swept[i].first == fs[i]);

    CHECK(swept.front().second.size() == 1);
    CHECK(swept.back().second.size() == 1);
    std::size_t max_count = 0;
    for (const auto& [f, sols] : swept) max_count = std::max(max_count, sols.size());
    CHECK(max_count > 1);
}

TEST_CASE("sweep_drive: independent of thread count") {
    ModelParams p = fig_params();
    p.v = 0.1;
    p.j_im = 0.1;
    std::vector<double> fs = {1.0, 2.0, 2.5, 3.0, 3.5};
    auto one = sweep_drive(p, fs, 24, 4, 1);
    auto four = sweep_drive(p, fs, 24, 4, 4);
    REQUIRE(one.size() == four.size());
    for (std::size_t i = 0; i < one.size(); ++i) {
        REQUIRE(one[i].second.size() == four[i].second.size());
        for (std::size_t k = 0; k < one[i].second.size(); ++k) {
            CHECK(one[i].second[k].state.alpha == four[i].second[k].state.alpha);
            CHECK(one[i].second[k].state.beta == four[i].second[k].state.beta);
        }
    }
}

TEST_CASE("asymmetry_ratio") {
    CHECK(asymmetry_ratio({{1.3, 0.0}, {0.0, 1.3}}) == 0.0);
    CHECK(asymmetry_ratio({{std::sqrt(6.0), 0.0}, {0.0, 0.0}}) == 1.0);
    CHECK(asymmetry_ratio({{0.0, 0.0}, {2.0, 0.0}}) == -1.0);
    CHECK(asymmetry_ratio({{std::sqrt(2.0), 0.0}, {1.0, 0.0}}) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK_THROWS_AS(asymmetry_ratio(SemiclassicalState{}), DegenerateState);
}
