#pragma once

#include <memory>
#include <span>

#include "dsop/estimate.hpp"
#include "dsop/model.hpp"
#include "dsop/prefix_cache.hpp"
#include "dsop/range_grid.hpp"
#include "dsop/sampling.hpp"
#include "dsop/transition.hpp"

namespace dsop {

/// Conservative matrix-product estimate. Throws Error when the path uses an
/// edge without a matrix.
ProbabilityEstimate matrix_completion_probability(const MatrixModel& model,
                                                  std::span<const VertexId> path,
                                                  const SolveRequest& request);

/// Convenience overload: builds the grid and the matrices for the path.
ProbabilityEstimate matrix_completion_probability(const Instance& instance,
                                                  std::span<const VertexId> path,
                                                  const SolveRequest& request,
                                                  std::size_t range_count,
                                                  const MatrixOptions& options = {});

/// A completion-probability engine bound to one instance, deadline, and start
/// time. Independent of epsilon, so one estimator serves a whole risk sweep.
/// Immutable; the instance must outlive it.
class Estimator {
 public:
  static Estimator matrix(const Instance& instance, const SolveRequest& request,
                          const SearchConfig& config);
  static Estimator sampling(const Instance& instance, const SolveRequest& request,
                            const SearchConfig& config);
  /// Picks the engine named by config.estimator.
  static Estimator from_config(const Instance& instance, const SolveRequest& request,
                               const SearchConfig& config);

  EstimatorKind kind() const { return kind_; }
  const Instance& instance() const { return *instance_; }
  double deadline() const { return deadline_; }
  double start_time() const { return start_time_; }
  const MatrixModel* matrix_model() const { return matrices_.get(); }
  const SampleBank* sample_bank() const { return bank_.get(); }

  ProbabilityEstimate estimate(std::span<const VertexId> path) const;

  /// Calls f with the matching propagator (MatrixPropagator or
  /// SamplingPropagator).
  template <class F>
  decltype(auto) visit(F&& f) const {
    if (kind_ == EstimatorKind::Matrix) return f(MatrixPropagator(*matrices_, start_time_));
    return f(SamplingPropagator(*bank_, start_time_, deadline_));
  }

 private:
  Estimator() = default;

  EstimatorKind kind_ = EstimatorKind::Matrix;
  const Instance* instance_ = nullptr;
  double deadline_ = 0.0;
  double start_time_ = 0.0;
  std::shared_ptr<const MatrixModel> matrices_;
  std::shared_ptr<const SampleBank> bank_;
};

}  // namespace dsop
