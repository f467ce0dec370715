#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "kerr_ring/model.hpp"
#include "kerr_ring/semiclassical.hpp"

namespace kerr_ring {

// Linearization d/dt u = A u around a fixed point, in the basis
// u = (d_alpha, d_beta, d_alpha*, d_beta*). Block structure
//   A = [ P       Q      ]
//       [ conj(Q) conj(P) ]
// with
//   P = [ -i Dt_a - g/2          -i(v a conj(b) - conj(J)) ]
//       [ -i(v conj(a) b - J)    -i Dt_b - g/2             ]
//   Q = [ -i g_a   -i g_x ]
//       [ -i g_x   -i g_b ]
// where Dt_a = Delta + eps + 2 u_a n_a + v n_b,
//       Dt_b = Delta - eps + 2 u_b n_b + v n_a,
//       g_a = u_a alpha^2, g_b = u_b beta^2, g_x = v alpha beta.
struct DriftMatrix {
    Eigen::Matrix4cd entries;
};

DriftMatrix drift_matrix(const SemiclassicalState& s, const ModelParams& p);
DriftMatrix drift_matrix(const FixedPoint& fp, const ModelParams& p);

// Standard dynamical-systems criterion on d/dt u = A u:
// Stable iff all Re(lambda) < -marginal_tol, Unstable iff any > +marginal_tol,
// else Marginal. marginal_tol = 1e-9 (eigensolver noise floor for 4x4).
Stability classify(const DriftMatrix& m);

// Number of distinct steady-state solutions over an (x, F_in) grid.
struct SolutionCountMap {
    enum class Axis { Delta, Epsilon };
    Axis axis = Axis::Delta;
    std::vector<double> x_values;
    std::vector<double> f_values;
    // Row-major over (x, f): index = ix * f_values.size() + jf.
    std::vector<int> count_total;
    std::vector<int> count_stable;
    std::vector<std::uint8_t> flagged;  // solver returned no solutions

    int at_total(std::size_t ix, std::size_t jf) const {
        return count_total[ix * f_values.size() + jf];
    }
    int at_stable(std::size_t ix, std::size_t jf) const {
        return count_stable[ix * f_values.size() + jf];
    }
};

SolutionCountMap solution_count_map(const ModelParams& p,
                                    SolutionCountMap::Axis axis,
                                    const std::vector<double>& x_values,
                                    const std::vector<double>& f_values,
                                    int n_starts = 64, std::uint64_t seed = 0,
                                    int threads = 1);

// Im[J] sweep at fixed drive (both modes driven at f_in): all branches with
// stability labels, warm-start continued between neighbouring Im[J] values.
std::vector<std::pair<double, std::vector<FixedPoint>>>
trsb_response(const ModelParams& p, const std::vector<double>& imj_values,
              double f_in, int n_starts = 64, std::uint64_t seed = 0,
              int threads = 1);

} // namespace kerr_ring
