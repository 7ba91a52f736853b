#include "dsop/errors.hpp"
#include "dsop/exact.hpp"

namespace dsop {

namespace {

struct Enumerator {
  std::span<const TimeDependentEdge* const> edges;
  double deadline;

  double run(std::size_t step, double arrival) const {
    if (step == edges.size()) return arrival <= deadline ? 1.0 : 0.0;
    const auto& dist = std::get<DiscreteDist>(edges[step]->distribution_at(arrival));
    double total = 0.0;
    for (const auto& o : dist.outcomes) {
      if (o.probability == 0.0) continue;
      total += o.probability * run(step + 1, arrival + o.time);
    }
    return total;
  }
};

}  // namespace

ProbabilityEstimate exact_completion_probability(const Instance& instance,
                                                 std::span<const VertexId> path,
                                                 const SolveRequest& request,
                                                 std::uint64_t outcome_cap) {
  ProbabilityEstimate est;
  est.method = EstimatorKind::ExactOracle;

  std::vector<const TimeDependentEdge*> edges;
  double bound = 1.0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    const auto* edge = instance.find_edge(path[i - 1], path[i]);
    if (!edge) return est;  // a missing edge can never be traversed
    std::size_t widest = 0;
    for (const auto& band : edge->bands) {
      const auto* d = std::get_if<DiscreteDist>(&band.dist);
      if (!d)
        throw UnsupportedError("exact oracle needs discrete distributions; edge " +
                               std::to_string(edge->from.value) + "->" +
                               std::to_string(edge->to.value) + " is not discrete");
      widest = std::max(widest, d->outcomes.size());
    }
    bound *= static_cast<double>(widest);
    if (bound > static_cast<double>(outcome_cap))
      throw ConfigError("exact oracle outcome count exceeds cap of " + std::to_string(outcome_cap));
    edges.push_back(edge);
  }

  const Enumerator enumerate{edges, request.deadline};
  est.value = enumerate.run(0, request.start_time);
  return est;
}

}  // namespace dsop
