#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <string>

#include "dsop/estimator.hpp"
#include "dsop/model.hpp"

namespace dsop {

/// Greedy insertion scores. dP is the probability loss caused by an
/// insertion, so every denominator lies in [1, 2].
enum class InsertionMetric { RatioR_P, InvP, RewardOnly, RewardSq_P, Ratio_SqrtP };

inline constexpr std::array<InsertionMetric, 5> kAllMetrics = {
    InsertionMetric::RatioR_P, InsertionMetric::InvP, InsertionMetric::RewardOnly,
    InsertionMetric::RewardSq_P, InsertionMetric::Ratio_SqrtP};

std::string to_string(InsertionMetric metric);
double metric_value(InsertionMetric metric, double reward_gain, double probability_loss);

struct InsertionScore {
  double reward_gain = 0.0;       // dR = R(v)
  double probability_loss = 0.0;  // dP = max(0, before - after)
  std::array<double, 5> values{};  // indexed like kAllMetrics

  double value(InsertionMetric m) const { return values[static_cast<std::size_t>(m)]; }
};

InsertionScore evaluate_insertion(double reward_gain, double probability_before,
                                  double probability_after);

using Rng = std::mt19937_64;

/// Exchanges two distinct interior vertices chosen uniformly; paths with fewer
/// than two interior vertices come back unchanged. (A random exchange, not the
/// classical segment-reversal 2-opt.)
Path two_opt(Path path, Rng& rng);

/// Simulated-annealing acceptance: true when dR > 0, otherwise with
/// probability exp(dR / T). Draws from rng only when dR <= 0.
bool sa_accept(double reward_delta, double temperature, Rng& rng);

/// Greedy insertion from ⟨start, exit⟩ with the ratio metric. Throws
/// NoFeasibleSolution when ⟨start, exit⟩ itself violates the chance constraint.
Path construction_heuristic(const Estimator& estimator, double epsilon, InsertionMetric metric);
Path construction_heuristic(const Instance& instance, const SolveRequest& request,
                            const SearchConfig& config, InsertionMetric metric);

/// Repeated best insertion until no unvisited vertex fits at any position.
/// The starting path must be feasible.
Path insertion_phase(const Estimator& estimator, double epsilon, Path path,
                     InsertionMetric metric);

/// Removes the second-last vertex while the path is infeasible or a uniform
/// draw is <= z (one draw per loop test, only once feasible).
Path removal_phase(const Estimator& estimator, double epsilon, Path path, double z, Rng& rng);

struct SearchResult {
  Solution construction;
  Solution best;
  std::size_t iterations = 0;
  double final_temperature = 0.0;
};

/// Construction heuristic followed by the iterated 2-opt / removal /
/// insertion / annealing loop. Deterministic for a fixed config.seed.
SearchResult run_local_search(const Estimator& estimator, double epsilon,
                              const SearchConfig& config);
Solution local_search(const Instance& instance, const SolveRequest& request,
                      const SearchConfig& config);

/// Depth-first search over branches from the start vertex; a branch is pruned
/// when appending the exit violates the chance constraint. Throws Timeout
/// (with the incumbent) once config.node_budget nodes have been expanded.
Solution branch_and_bound(const Estimator& estimator, double epsilon, const SearchConfig& config);
Solution branch_and_bound(const Instance& instance, const SolveRequest& request,
                          const SearchConfig& config);

enum class Method { ConstructionHeuristic, LocalSearch, BranchAndBound };

std::string to_string(Method method);
Method method_from_string(const std::string& name);

}  // namespace dsop

namespace dsop {

/// Runs one method and packages the result as a Solution.
Solution solve(Method method, const Estimator& estimator, double epsilon,
               const SearchConfig& config);

}  // namespace dsop
