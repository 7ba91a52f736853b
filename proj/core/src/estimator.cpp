#include "dsop/errors.hpp"
#include "dsop/estimator.hpp"
#include "dsop/seeds.hpp"

namespace dsop {

ProbabilityEstimate matrix_completion_probability(const MatrixModel& model,
                                                  std::span<const VertexId> path,
                                                  const SolveRequest& request) {
  ProbabilityEstimate est;
  est.method = EstimatorKind::Matrix;
  auto dist = initial_distribution(model.grid(), request.start_time);
  ArrivalDistribution next;
  next.mass.resize(dist.mass.size());
  for (std::size_t i = 1; i < path.size(); ++i) {
    const auto* m = model.matrix(path[i - 1], path[i]);
    if (!m)
      throw Error("no transition matrix for edge " + std::to_string(path[i - 1].value) + "->" +
                  std::to_string(path[i].value));
    m->propagate(dist.mass, next.mass);
    dist.mass.swap(next.mass);
  }
  est.value = dist.on_time();
  return est;
}

ProbabilityEstimate matrix_completion_probability(const Instance& instance,
                                                  std::span<const VertexId> path,
                                                  const SolveRequest& request,
                                                  std::size_t range_count,
                                                  const MatrixOptions& options) {
  const MatrixModel model(instance, RangeGrid::build(request, instance, range_count), options);
  return matrix_completion_probability(model, path, request);
}

Estimator Estimator::matrix(const Instance& instance, const SolveRequest& request,
                            const SearchConfig& config) {
  Estimator e;
  e.kind_ = EstimatorKind::Matrix;
  e.instance_ = &instance;
  e.deadline_ = request.deadline;
  e.start_time_ = request.start_time;
  MatrixOptions options;
  options.interior_probes = config.interior_probes;
  e.matrices_ = std::make_shared<const MatrixModel>(
      instance, RangeGrid::build(request, instance, config.range_count, config.max_grid_refinement),
      options);
  return e;
}

Estimator Estimator::sampling(const Instance& instance, const SolveRequest& request,
                              const SearchConfig& config) {
  Estimator e;
  e.kind_ = EstimatorKind::Sampling;
  e.instance_ = &instance;
  e.deadline_ = request.deadline;
  e.start_time_ = request.start_time;
  e.bank_ = std::make_shared<const SampleBank>(instance, config.sample_count,
                                               derive_seed(config.seed, "sampler"));
  return e;
}

Estimator Estimator::from_config(const Instance& instance, const SolveRequest& request,
                                 const SearchConfig& config) {
  switch (config.estimator) {
    case EstimatorKind::Matrix:
      return matrix(instance, request, config);
    case EstimatorKind::Sampling:
      return sampling(instance, request, config);
    case EstimatorKind::ExactOracle:
      break;
  }
  throw ConfigError("the exact oracle cannot drive a solver");
}

ProbabilityEstimate Estimator::estimate(std::span<const VertexId> path) const {
  SolveRequest request{deadline_, 0.0, start_time_};
  if (kind_ == EstimatorKind::Matrix) return matrix_completion_probability(*matrices_, path, request);
  return sampling_completion_probability(*bank_, path, request);
}

}  // namespace dsop
