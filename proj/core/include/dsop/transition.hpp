#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dsop/model.hpp"
#include "dsop/range_grid.hpp"

namespace dsop {

/// Probability mass per arrival-time range, overflow last. Entries sum to at
/// most one; conservative propagation leaks mass rather than inventing it.
struct ArrivalDistribution {
  std::vector<double> mass;

  /// Mass in the non-overflow ranges, i.e. the conservative P(a <= H).
  double on_time() const;
  friend bool operator==(const ArrivalDistribution&, const ArrivalDistribution&) = default;
};

/// Point mass at the range containing `start_time`.
ArrivalDistribution initial_distribution(const RangeGrid& grid, double start_time);

struct MatrixOptions {
  /// Interior probe points (besides both endpoints) used to minimise over a
  /// source range for continuous distributions.
  std::size_t interior_probes = 3;
  /// Entries below this are stored as zero, which keeps the lower bound.
  double drop_below = 1e-14;
};

/// Conservative range-to-range transition probabilities for one edge.
///
/// On a uniform band-aligned grid an entry (p, q) only depends on q - p and on
/// the band containing range p, so each band keeps one offset profile and the
/// full (count+1)^2 matrix is never materialised.
class TransitionMatrix {
 public:
  TransitionMatrix() = default;

  std::size_t dimension() const { return count_ + 1; }
  double at(std::size_t p, std::size_t q) const;

  /// out = in * M. `out` must have dimension() entries; it is overwritten.
  void propagate(std::span<const double> in, std::span<double> out) const;
  ArrivalDistribution propagate(const ArrivalDistribution& in) const;

 private:
  friend TransitionMatrix edge_transition_matrix(const TimeDependentEdge&, const RangeGrid&,
                                                 const MatrixOptions&);
  struct Profile {
    std::size_t first = 0;         // offset of values[0]
    std::vector<double> values;    // entry for offset first + i
    std::vector<double> tail;      // tail[j] = P(T >= j * width), j = 0..count
  };

  std::size_t count_ = 0;
  std::vector<Profile> profiles_;
  std::vector<std::uint32_t> row_profile_;
};

/// Matrix of min over a_i in r_p of P(a_i + T in r_q) with T drawn from the
/// band active over r_p. The grid must be band-aligned with the edge.
TransitionMatrix edge_transition_matrix(const TimeDependentEdge& edge, const RangeGrid& grid,
                                        const MatrixOptions& options = {});

/// Transition matrices for every edge of an instance on one grid. Immutable
/// after construction, so it can be shared between concurrent solver runs.
class MatrixModel {
 public:
  MatrixModel(const Instance& instance, RangeGrid grid, const MatrixOptions& options = {});

  const RangeGrid& grid() const { return grid_; }
  /// nullptr for a missing edge.
  const TransitionMatrix* matrix(VertexId from, VertexId to) const;
  const Instance& instance() const { return *instance_; }

 private:
  const Instance* instance_;
  RangeGrid grid_;
  std::vector<TransitionMatrix> matrices_;
};

}  // namespace dsop
