#pragma once

#include <cstdint>
#include <span>

#include "dsop/estimate.hpp"
#include "dsop/model.hpp"

namespace dsop {

/// Exact completion probability by enumerating every joint outcome along the
/// path, picking each edge's band from the accumulated arrival time. Every
/// band of every path edge must be Discrete (UnsupportedError otherwise);
/// throws ConfigError if the outcome count could exceed `outcome_cap`.
ProbabilityEstimate exact_completion_probability(const Instance& instance,
                                                 std::span<const VertexId> path,
                                                 const SolveRequest& request,
                                                 std::uint64_t outcome_cap = 10'000'000);

}  // namespace dsop
