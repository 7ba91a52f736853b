#pragma once

#include <cstdint>
#include <iosfwd>

namespace dsop::app {

/// Estimator cross-check on random all-discrete instances and paths.
struct VerifyOptions {
  std::size_t trials = 100;
  std::size_t paths_per_trial = 5;
  std::size_t samples = 10'000;
  std::size_t range_count = 100;
  std::size_t min_vertices = 3;
  std::size_t max_vertices = 6;
  std::uint64_t seed = 0;
  /// Acceptance band for |sampling - exact|.
  double sampling_tolerance = 0.02;
  /// Required share of cases inside the band.
  double required_share = 0.95;
};

struct VerifyReport {
  std::size_t cases = 0;
  std::size_t conservativeness_violations = 0;
  double worst_matrix_excess = 0.0;  // max(matrix - exact), may be negative
  std::size_t sampling_within_tolerance = 0;
  std::size_t sampling_within_three_sigma = 0;  // |error| <= 3 sqrt(0.25 / N)
  double max_sampling_error = 0.0;
  std::size_t dynamic_instances = 0;

  double sampling_share() const {
    return cases == 0 ? 1.0 : static_cast<double>(sampling_within_tolerance) / cases;
  }
  double three_sigma_share() const {
    return cases == 0 ? 1.0 : static_cast<double>(sampling_within_three_sigma) / cases;
  }
  bool passed(const VerifyOptions& options) const {
    return conservativeness_violations == 0 && sampling_share() >= options.required_share;
  }
};

VerifyReport run_verify(const VerifyOptions& options);
void write_verify_report(std::ostream& out, const VerifyOptions& options,
                         const VerifyReport& report);

}  // namespace dsop::app
