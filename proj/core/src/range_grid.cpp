#include <cmath>
#include <limits>

#include "dsop/errors.hpp"
#include "dsop/range_grid.hpp"

namespace dsop {

namespace {

constexpr double kAlignTolerance = 1e-9;

}  // namespace

RangeGrid::RangeGrid(double horizon, std::size_t count) : horizon_(horizon), count_(count) {
  if (!(std::isfinite(horizon) && horizon > 0.0))
    throw ConfigError("range grid horizon must be finite and > 0");
  if (count == 0) throw ConfigError("range grid needs at least one range");
}

double RangeGrid::lower(std::size_t r) const {
  // Multiply before dividing so integral boundaries stay exact.
  return static_cast<double>(r) * horizon_ / static_cast<double>(count_);
}

double RangeGrid::upper(std::size_t r) const {
  if (r >= count_) return std::numeric_limits<double>::infinity();
  return lower(r + 1);
}

std::size_t RangeGrid::index_of(double t) const {
  if (t >= horizon_) return count_;
  if (t <= 0.0) return 0;
  auto r = static_cast<std::size_t>(std::floor(t / width()));
  if (r > count_) r = count_;
  while (r > 0 && lower(r) > t) --r;
  while (r < count_ && lower(r + 1) <= t) ++r;
  return r;
}

bool RangeGrid::is_boundary(double t) const {
  const double cells = t / width();
  return std::abs(cells - std::round(cells)) <= kAlignTolerance * std::max(1.0, cells);
}

RangeGrid RangeGrid::build(const SolveRequest& request, const Instance& instance,
                           std::size_t range_count, std::size_t max_refinement) {
  if (range_count == 0) throw ConfigError("range count must be >= 1");
  for (std::size_t factor = 1; factor <= max_refinement; ++factor) {
    RangeGrid grid(request.deadline, range_count * factor);
    const TimeDependentEdge* offending = nullptr;
    std::size_t offending_band = 0;
    for (const auto& edge : instance.edges()) {
      for (std::size_t b = 1; b < edge.bands.size(); ++b) {
        const double s = edge.bands[b].start;
        if (s <= 0.0 || s >= request.deadline) continue;
        if (!grid.is_boundary(s)) {
          offending = &edge;
          offending_band = b;
          break;
        }
      }
      if (offending) break;
    }
    if (!offending) return grid;
    if (factor == max_refinement) {
      throw ConfigError("band boundary " + std::to_string(offending->bands[offending_band].start) +
                        " of edge " + std::to_string(offending->from.value) + "->" +
                        std::to_string(offending->to.value) + " (band " +
                        std::to_string(offending_band) + ") cannot be aligned with a grid of " +
                        std::to_string(range_count) + " ranges over H=" +
                        std::to_string(request.deadline) + " within refinement factor " +
                        std::to_string(max_refinement));
    }
  }
  throw ConfigError("unreachable grid refinement state");
}

}  // namespace dsop
