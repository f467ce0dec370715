#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "kerr_ring/model.hpp"
#include "kerr_ring/semiclassical.hpp"

namespace kerr_ring::detail {

// Damped Newton from one starting point; returns a verified, classified
// fixed point or nothing. Shared by the multistart solver and the sweep
// continuation helpers.
std::optional<FixedPoint> newton_polish(const SemiclassicalState& start,
                                        const ModelParams& p);

// Generic one-parameter sweep: multistart solve at every value (parallel,
// deterministic per-value seeds), then a sequential forward/backward pass
// that warm-starts Newton from the neighbours' solutions so continuous
// branches are not lost between grid points.
std::vector<std::pair<double, std::vector<FixedPoint>>>
swept_fixed_points(const std::function<ModelParams(double)>& params_at,
                   const std::vector<double>& values, int n_starts,
                   std::uint64_t seed, int threads);

} // namespace kerr_ring::detail
