#include <algorithm>
#include <cmath>
#include <sstream>

#include "dsop/errors.hpp"
#include "dsop/model.hpp"

namespace dsop {

namespace {

constexpr double kProbabilitySumTolerance = 1e-9;

bool finite_non_negative(double x) { return std::isfinite(x) && x >= 0.0; }

std::string edge_field(std::size_t e) { return "edges[" + std::to_string(e) + "]"; }

}  // namespace

ValidationError::ValidationError(std::vector<Violation> violations)
    : Error([&] {
        std::ostringstream os;
        os << violations.size() << " validation violation(s)";
        for (const auto& v : violations) os << "; " << v.field << ": " << v.rule;
        return os.str();
      }()),
      violations_(std::move(violations)) {}

std::size_t TimeDependentEdge::band_index(double arrival) const {
  // bands[0].start == 0 for valid edges; everything before it maps to band 0.
  std::size_t b = 0;
  while (b + 1 < bands.size() && bands[b + 1].start <= arrival) ++b;
  return b;
}

Instance::Instance(std::vector<VertexData> vertices, std::vector<TimeDependentEdge> edges,
                   VertexId start, VertexId exit)
    : vertices_(std::move(vertices)), edges_(std::move(edges)), start_(start), exit_(exit) {
  const std::size_t n = vertices_.size();
  index_.assign(n * n, -1);
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const auto& edge = edges_[e];
    if (edge.from.index() >= n || edge.to.index() >= n) continue;
    auto& slot = index_[edge.from.index() * n + edge.to.index()];
    if (slot < 0) slot = static_cast<std::int32_t>(e);
  }
}

std::optional<std::size_t> Instance::edge_index(VertexId from, VertexId to) const {
  const std::size_t n = vertices_.size();
  if (from.index() >= n || to.index() >= n) return std::nullopt;
  const auto slot = index_[from.index() * n + to.index()];
  if (slot < 0) return std::nullopt;
  return static_cast<std::size_t>(slot);
}

const TimeDependentEdge* Instance::find_edge(VertexId from, VertexId to) const {
  const auto e = edge_index(from, to);
  return e ? &edges_[*e] : nullptr;
}

std::string to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::Matrix:
      return "matrix";
    case EstimatorKind::Sampling:
      return "sampling";
    case EstimatorKind::ExactOracle:
      return "exact";
  }
  return "unknown";
}

EstimatorKind estimator_from_string(const std::string& name) {
  if (name == "matrix") return EstimatorKind::Matrix;
  if (name == "sampling") return EstimatorKind::Sampling;
  if (name == "exact") return EstimatorKind::ExactOracle;
  throw ConfigError("unknown estimator '" + name + "'");
}

std::vector<Violation> validate_instance(const Instance& instance) {
  std::vector<Violation> out;
  const std::size_t n = instance.vertex_count();
  if (n == 0) out.push_back({"vertices", "instance has no vertices"});
  if (instance.start().index() >= n) out.push_back({"start", "start vertex out of range"});
  if (instance.exit().index() >= n) out.push_back({"exit", "exit vertex out of range"});

  for (std::size_t v = 0; v < n; ++v) {
    const auto& data = instance.vertices()[v];
    const std::string field = "vertices[" + std::to_string(v) + "]";
    if (!finite_non_negative(data.reward))
      out.push_back({field + ".reward", "reward must be finite and >= 0"});
    if (!finite_non_negative(data.penalty))
      out.push_back({field + ".penalty", "penalty must be finite and >= 0"});
  }

  std::vector<char> seen(n * n, 0);
  for (std::size_t e = 0; e < instance.edges().size(); ++e) {
    const auto& edge = instance.edges()[e];
    const std::string field = edge_field(e);
    bool endpoints_ok = true;
    if (edge.from.index() >= n) {
      out.push_back({field + ".from", "vertex out of range"});
      endpoints_ok = false;
    }
    if (edge.to.index() >= n) {
      out.push_back({field + ".to", "vertex out of range"});
      endpoints_ok = false;
    }
    if (endpoints_ok) {
      if (edge.from == edge.to) out.push_back({field, "self-loop edge"});
      auto& flag = seen[edge.from.index() * n + edge.to.index()];
      if (flag) out.push_back({field, "duplicate edge"});
      flag = 1;
    }
    if (edge.bands.empty()) {
      out.push_back({field + ".bands", "edge needs at least one band"});
      continue;
    }
    if (edge.bands.front().start != 0.0)
      out.push_back({field + ".bands[0].start", "first band must start at 0"});
    for (std::size_t b = 0; b < edge.bands.size(); ++b) {
      const auto& band = edge.bands[b];
      const std::string bfield = field + ".bands[" + std::to_string(b) + "]";
      if (!finite_non_negative(band.start))
        out.push_back({bfield + ".start", "band start must be finite and >= 0"});
      if (b > 0 && !(band.start > edge.bands[b - 1].start))
        out.push_back({bfield + ".start", "band starts must be strictly increasing"});
      if (const auto* g = std::get_if<GammaDist>(&band.dist)) {
        if (!(std::isfinite(g->shape) && g->shape > 0.0))
          out.push_back({bfield + ".dist.shape", "gamma shape must be > 0"});
        if (!(std::isfinite(g->scale) && g->scale > 0.0))
          out.push_back({bfield + ".dist.scale", "gamma scale must be > 0"});
      } else {
        const auto& d = std::get<DiscreteDist>(band.dist);
        if (d.outcomes.empty()) {
          out.push_back({bfield + ".dist.outcomes", "discrete distribution has no outcomes"});
          continue;
        }
        double sum = 0.0;
        for (std::size_t o = 0; o < d.outcomes.size(); ++o) {
          const auto& oc = d.outcomes[o];
          const std::string ofield = bfield + ".dist.outcomes[" + std::to_string(o) + "]";
          if (!finite_non_negative(oc.time))
            out.push_back({ofield + ".time", "travel time must be finite and >= 0"});
          if (!(oc.probability >= 0.0 && oc.probability <= 1.0))
            out.push_back({ofield + ".prob", "probability must lie in [0, 1]"});
          sum += oc.probability;
        }
        if (std::abs(sum - 1.0) > kProbabilitySumTolerance)
          out.push_back({bfield + ".dist", "probabilities sum to " + std::to_string(sum) +
                                               ", expected 1"});
      }
    }
  }
  return out;
}

std::vector<Violation> validate_request(const SolveRequest& request) {
  std::vector<Violation> out;
  if (!(std::isfinite(request.deadline) && request.deadline > 0.0))
    out.push_back({"deadline", "deadline H must be finite and > 0"});
  if (!(request.epsilon >= 0.0 && request.epsilon <= 1.0))
    out.push_back({"epsilon", "epsilon must lie in [0, 1]"});
  if (!finite_non_negative(request.start_time))
    out.push_back({"start_time", "start time must be finite and >= 0"});
  else if (request.start_time > request.deadline)
    out.push_back({"start_time", "start time must not exceed the deadline"});
  return out;
}

std::vector<Violation> validate_config(const SearchConfig& config) {
  std::vector<Violation> out;
  if (config.max_iterations == 0) out.push_back({"max_iterations", "must be > 0"});
  if (config.max_iter_no_improve == 0) out.push_back({"max_iter_no_improve", "must be > 0"});
  if (!(config.initial_temperature > 0.0))
    out.push_back({"initial_temperature", "must be > 0"});
  if (!(config.cooling > 0.0 && config.cooling < 1.0))
    out.push_back({"cooling", "must lie in (0, 1)"});
  if (config.range_count == 0) out.push_back({"range_count", "must be > 0"});
  if (config.sample_count == 0) out.push_back({"sample_count", "must be > 0"});
  if (config.max_grid_refinement == 0) out.push_back({"max_grid_refinement", "must be > 0"});
  return out;
}

std::vector<Violation> check_path(const Instance& instance, std::span<const VertexId> path) {
  std::vector<Violation> out;
  if (path.size() < 2) {
    out.push_back({"path", "path needs at least the start and exit vertices"});
    return out;
  }
  if (path.front() != instance.start()) out.push_back({"path[0]", "path must begin at start"});
  if (path.back() != instance.exit())
    out.push_back({"path[" + std::to_string(path.size() - 1) + "]", "path must end at exit"});

  const std::size_t n = instance.vertex_count();
  std::vector<char> seen(n, 0);
  const bool tour = instance.start() == instance.exit();
  for (std::size_t i = 0; i < path.size(); ++i) {
    const auto v = path[i];
    const std::string field = "path[" + std::to_string(i) + "]";
    if (v.index() >= n) {
      out.push_back({field, "vertex out of range"});
      continue;
    }
    const bool closing = tour && i + 1 == path.size() && v == path.front();
    if (seen[v.index()] && !closing) out.push_back({field, "repeated vertex"});
    seen[v.index()] = 1;
    if (i > 0 && path[i - 1].index() < n && !instance.find_edge(path[i - 1], v))
      out.push_back({field, "no edge from " + std::to_string(path[i - 1].value) + " to " +
                                std::to_string(v.value)});
  }
  return out;
}

double path_reward(const Instance& instance, std::span<const VertexId> path) {
  double total = 0.0;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i + 1 == path.size() && i > 0 && path[i] == path.front()) break;  // closing a tour
    total += instance.vertex(path[i]).reward;
  }
  return total;
}

std::string format_path(std::span<const VertexId> path) {
  std::string s;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) s += ' ';
    s += std::to_string(path[i].value);
  }
  return s;
}

}  // namespace dsop
