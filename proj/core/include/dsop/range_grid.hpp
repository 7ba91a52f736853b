#pragma once

#include <cstddef>

#include "dsop/model.hpp"

namespace dsop {

/// Uniform partition of [0, H) into `count` half-open arrival-time ranges plus
/// an absorbing overflow range [H, inf). One grid is shared by every vertex so
/// transition matrices compose by plain multiplication.
class RangeGrid {
 public:
  RangeGrid(double horizon, std::size_t count);

  /// Grid for `request.deadline` with `range_count` ranges, refined by integer
  /// factors (up to `max_refinement`) until every band boundary inside (0, H)
  /// is a grid boundary. Throws ConfigError naming the offending band.
  static RangeGrid build(const SolveRequest& request, const Instance& instance,
                         std::size_t range_count, std::size_t max_refinement = 64);

  double horizon() const { return horizon_; }
  std::size_t count() const { return count_; }
  double width() const { return horizon_ / static_cast<double>(count_); }

  /// Index of the overflow range, also the matrix dimension minus one.
  std::size_t overflow() const { return count_; }
  std::size_t dimension() const { return count_ + 1; }

  double lower(std::size_t r) const;
  double upper(std::size_t r) const;

  /// Range containing time t; overflow() when t >= H.
  std::size_t index_of(double t) const;

  bool is_boundary(double t) const;

 private:
  double horizon_;
  std::size_t count_;
};

}  // namespace dsop
