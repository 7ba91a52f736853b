#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace dsop {

/// Index of a vertex inside its owning Instance.
struct VertexId {
  std::uint32_t value = 0;

  constexpr VertexId() = default;
  constexpr explicit VertexId(std::uint32_t v) : value(v) {}
  constexpr std::size_t index() const { return value; }

  friend constexpr auto operator<=>(VertexId, VertexId) = default;
};

/// Gamma travel time with shape k and scale theta (mean k * theta).
struct GammaDist {
  double shape = 1.0;
  double scale = 1.0;

  double mean() const { return shape * scale; }
  friend bool operator==(const GammaDist&, const GammaDist&) = default;
};

struct Outcome {
  double time = 0.0;
  double probability = 0.0;
  friend bool operator==(const Outcome&, const Outcome&) = default;
};

/// Finite-support travel time.
struct DiscreteDist {
  std::vector<Outcome> outcomes;
  friend bool operator==(const DiscreteDist&, const DiscreteDist&) = default;
};

using Distribution = std::variant<GammaDist, DiscreteDist>;

/// P(T <= x).
double cdf(const Distribution& dist, double x);
/// P(T < x).
double cdf_below(const Distribution& dist, double x);
double mean(const Distribution& dist);

/// A travel-time distribution that applies to source arrival times in
/// [start, next band's start).
struct Band {
  double start = 0.0;
  Distribution dist;
  friend bool operator==(const Band&, const Band&) = default;
};

struct TimeDependentEdge {
  VertexId from;
  VertexId to;
  std::vector<Band> bands;

  /// Band whose half-open interval contains `arrival`. A boundary belongs to
  /// the later band.
  std::size_t band_index(double arrival) const;
  const Distribution& distribution_at(double arrival) const {
    return bands[band_index(arrival)].dist;
  }
  bool is_dynamic() const { return bands.size() > 1; }

  friend bool operator==(const TimeDependentEdge&, const TimeDependentEdge&) = default;
};

struct VertexData {
  double reward = 0.0;
  double penalty = 0.0;
  friend bool operator==(const VertexData&, const VertexData&) = default;
};

/// Graph, rewards, and time-banded stochastic travel times. Deadline, risk
/// level, and start time live in SolveRequest so one instance serves many
/// requests. Missing edges mean the pair can never be traversed.
class Instance {
 public:
  Instance() = default;
  Instance(std::vector<VertexData> vertices, std::vector<TimeDependentEdge> edges,
           VertexId start, VertexId exit);

  std::size_t vertex_count() const { return vertices_.size(); }
  const std::vector<VertexData>& vertices() const { return vertices_; }
  const VertexData& vertex(VertexId v) const { return vertices_[v.index()]; }
  const std::vector<TimeDependentEdge>& edges() const { return edges_; }
  VertexId start() const { return start_; }
  VertexId exit() const { return exit_; }

  /// Position of edge (from, to) in edges(), if present.
  std::optional<std::size_t> edge_index(VertexId from, VertexId to) const;
  const TimeDependentEdge* find_edge(VertexId from, VertexId to) const;

  friend bool operator==(const Instance& a, const Instance& b) {
    return a.vertices_ == b.vertices_ && a.edges_ == b.edges_ && a.start_ == b.start_ &&
           a.exit_ == b.exit_;
  }

 private:
  std::vector<VertexData> vertices_;
  std::vector<TimeDependentEdge> edges_;
  VertexId start_;
  VertexId exit_;
  // Dense vertex_count^2 lookup; -1 marks a missing edge. Only built when all
  // endpoints are in range (validate_instance reports the rest).
  std::vector<std::int32_t> index_;
};

/// Ordered vertex sequence from start to exit.
using Path = std::vector<VertexId>;

struct SolveRequest {
  double deadline = 0.0;  // H
  double epsilon = 0.0;   // allowed failure probability
  double start_time = 0.0;
};

enum class EstimatorKind { Matrix, Sampling, ExactOracle };

std::string to_string(EstimatorKind kind);
EstimatorKind estimator_from_string(const std::string& name);

struct SearchConfig {
  std::size_t max_iterations = 1500;
  std::size_t max_iter_no_improve = 50;
  double initial_temperature = 0.1;
  double cooling = 0.99;
  std::size_t range_count = 100;
  std::size_t sample_count = 1000;
  std::uint64_t seed = 0;
  EstimatorKind estimator = EstimatorKind::Matrix;

  // Engineering knobs beyond the algorithm parameters.
  std::size_t max_grid_refinement = 64;
  std::size_t interior_probes = 3;
  std::uint64_t node_budget = 10'000'000;
};

struct Solution {
  Path path;
  double reward = 0.0;
  double completion_probability = 0.0;
  EstimatorKind estimator = EstimatorKind::Matrix;
  double runtime_seconds = 0.0;
};

struct Violation {
  std::string field;
  std::string rule;
  friend bool operator==(const Violation&, const Violation&) = default;
};

std::vector<Violation> validate_instance(const Instance& instance);
std::vector<Violation> validate_request(const SolveRequest& request);
std::vector<Violation> validate_config(const SearchConfig& config);

/// Structural path check: endpoints, repeats, and edge existence.
std::vector<Violation> check_path(const Instance& instance, std::span<const VertexId> path);

/// Sum of rewards over every vertex of the path, endpoints included.
double path_reward(const Instance& instance, std::span<const VertexId> path);

std::string format_path(std::span<const VertexId> path);

}  // namespace dsop
