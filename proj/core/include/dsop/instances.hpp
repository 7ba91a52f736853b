#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "dsop/model.hpp"

namespace dsop {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Knobs for the gamma-travel-time synthetic instances.
struct GeneratorConfig {
  std::size_t vertex_count = 32;
  /// When set, used instead of seeded uniform points in [0, side]^2.
  std::optional<std::vector<Point>> coordinates;
  double side = 10.0;
  /// Fixed scale theta in [1, 4]; ignored by the hard variant, which draws a
  /// scale per edge.
  double theta = 2.0;
  double min_shape = 2.0;
  double max_shape = 9.0;
  int min_reward = 1;
  int max_reward = 100;
  /// Penalty C(v) as a fraction of the reward.
  double penalty_fraction = 0.0;
  std::size_t band_count = 3;
  /// Band b >= 1 starts at b * band_span.
  double band_span = 24.0;
  /// Per-band multiplicative shape drift, drawn from [1 - d, 1 + d].
  double band_drift = 0.1;
  bool hard = false;
  /// Hard variant: fraction of edges whose mean is inflated, and the factor range.
  double inflate_fraction = 0.2;
  double inflate_min = 1.5;
  double inflate_max = 3.0;
  std::size_t max_retries = 100;
  std::uint64_t seed = 0;
};

/// Shape and adjusted scale with k = clamp(mean / theta, min, max) and
/// k * scale == mean.
GammaDist gamma_for_mean(double mean, double theta, double min_shape, double max_shape);

/// Shape scaled by `factor` and re-clamped; the scale is kept.
GammaDist inflate_gamma(const GammaDist& g, double factor, double max_shape);

std::vector<Point> generate_points(std::size_t count, double side, std::uint64_t seed);

/// Complete directed graph on the points, start 0, exit n-1, each edge a
/// banded gamma whose base mean is the Euclidean distance.
Instance generate_synthetic(const GeneratorConfig& config);

/// Per-edge random scales and a seeded subset of inflated means; guarantees at
/// least one violated triangle inequality (GenerationError otherwise).
Instance generate_hard_variant(const GeneratorConfig& config);

/// A triple (i, j, l) with mean(i,l) > mean(i,j) + mean(j,l) on band 0, if any.
std::optional<std::array<VertexId, 3>> find_violated_triangle(const Instance& instance);

/// Small all-discrete instances for the exact oracle.
struct OracleConfig {
  std::size_t vertex_count = 4;
  std::size_t outcomes_per_edge = 2;
  std::size_t band_count = 2;
  /// Support values are drawn from [min_time, max_time], snapped to multiples
  /// of time_step when time_step > 0.
  double min_time = 0.5;
  double max_time = 4.0;
  double time_step = 0.0;
  /// Band 1 starts at a multiple of band_unit in [band_unit, max_band_start].
  double band_unit = 1.0;
  double max_band_start = 6.0;
  std::uint64_t seed = 0;
};

inline constexpr std::size_t kMaxOracleVertices = 8;

Instance generate_oracle_instance(const OracleConfig& config);

}  // namespace dsop
