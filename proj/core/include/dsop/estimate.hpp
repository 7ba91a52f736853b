#pragma once

#include <cstddef>

#include "dsop/model.hpp"

namespace dsop {

/// A completion-probability estimate tagged with the method that produced it.
struct ProbabilityEstimate {
  double value = 0.0;
  EstimatorKind method = EstimatorKind::Matrix;
  // Sampling only: value == successes / samples.
  std::size_t samples = 0;
  std::size_t successes = 0;
};

/// Slack on the 1 - eps comparison for representation error in 1 - eps itself.
inline constexpr double kFeasibilitySlack = 1e-12;

inline double feasibility_threshold(double epsilon) { return 1.0 - epsilon - kFeasibilitySlack; }

/// P(a_n <= H) >= 1 - eps.
inline bool is_feasible(double probability, double epsilon) {
  return probability >= feasibility_threshold(epsilon);
}
inline bool is_feasible(const ProbabilityEstimate& estimate, double epsilon) {
  return is_feasible(estimate.value, epsilon);
}

}  // namespace dsop
