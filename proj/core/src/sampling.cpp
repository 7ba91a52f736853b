#include <limits>
#include <random>

#include <boost/random/gamma_distribution.hpp>
#include <boost/random/uniform_01.hpp>

#include "dsop/errors.hpp"
#include "dsop/sampling.hpp"

namespace dsop {

namespace {

constexpr auto kNotDrawn = std::numeric_limits<std::size_t>::max();

std::vector<double> draw_column(const Distribution& dist, std::size_t samples, std::uint64_t seed,
                                const TimeDependentEdge& edge, std::size_t band) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    edge.from.value, edge.to.value, static_cast<std::uint32_t>(band)};
  std::mt19937_64 engine(seq);
  std::vector<double> out(samples);
  if (const auto* g = std::get_if<GammaDist>(&dist)) {
    boost::random::gamma_distribution<double> gamma(g->shape, g->scale);
    for (auto& x : out) x = gamma(engine);
  } else {
    const auto& d = std::get<DiscreteDist>(dist);
    boost::random::uniform_01<double> unit;
    for (auto& x : out) {
      const double u = unit(engine);
      double acc = 0.0;
      x = d.outcomes.back().time;
      for (const auto& o : d.outcomes) {
        acc += o.probability;
        if (u < acc) {
          x = o.time;
          break;
        }
      }
    }
  }
  return out;
}

}  // namespace

SampleBank::SampleBank(const Instance& instance, std::size_t samples, std::uint64_t seed)
    : instance_(&instance), samples_(samples), seed_(seed),
      offset_(instance.edges().size(), kNotDrawn) {
  if (samples == 0) throw ConfigError("sample count must be >= 1");
  for (std::size_t e = 0; e < instance.edges().size(); ++e) draw_edge(e);
}

SampleBank::SampleBank(const Instance& instance, std::size_t samples, std::uint64_t seed,
                       std::span<const VertexId> path)
    : instance_(&instance), samples_(samples), seed_(seed),
      offset_(instance.edges().size(), kNotDrawn) {
  if (samples == 0) throw ConfigError("sample count must be >= 1");
  for (std::size_t i = 1; i < path.size(); ++i)
    if (const auto e = instance.edge_index(path[i - 1], path[i])) draw_edge(*e);
}

void SampleBank::draw_edge(std::size_t e) {
  if (offset_[e] != kNotDrawn) return;
  const auto& edge = instance_->edges()[e];
  offset_[e] = columns_.size();
  for (std::size_t b = 0; b < edge.bands.size(); ++b)
    columns_.push_back(draw_column(edge.bands[b].dist, samples_, seed_, edge, b));
}

std::span<const double> SampleBank::column(std::size_t edge, std::size_t band) const {
  if (edge >= offset_.size() || offset_[edge] == kNotDrawn) return {};
  return columns_[offset_[edge] + band];
}

std::size_t SampleBank::advance(std::span<const double> arrivals, VertexId from, VertexId to,
                                double deadline, std::span<double> out) const {
  const auto e = instance_->edge_index(from, to);
  if (!e) {
    std::fill(out.begin(), out.end(), std::numeric_limits<double>::infinity());
    return 0;
  }
  if (offset_[*e] == kNotDrawn) throw Error("sample bank has no draws for this edge");
  const auto& edge = instance_->edges()[*e];
  const std::size_t bands = edge.bands.size();
  const std::size_t first = offset_[*e];
  std::size_t on_time = 0;
  if (bands == 1) {
    const double* col = columns_[first].data();
    for (std::size_t w = 0; w < samples_; ++w) {
      const double a = arrivals[w];
      const double t = a > deadline ? a : a + col[w];
      out[w] = t;
      on_time += t <= deadline;
    }
    return on_time;
  }
  // Walks that are already late keep their arrival time. The band lookup
  // counts the band starts at or below the arrival, which is band_index.
  constexpr std::size_t kInline = 8;
  if (bands <= kInline) {
    double starts[kInline];
    const double* cols[kInline];
    for (std::size_t k = 0; k < bands; ++k) {
      starts[k] = edge.bands[k].start;
      cols[k] = columns_[first + k].data();
    }
    for (std::size_t w = 0; w < samples_; ++w) {
      const double a = arrivals[w];
      std::size_t b = 0;
      for (std::size_t k = 1; k < bands; ++k) b += a >= starts[k];
      const double t = a > deadline ? a : a + cols[b][w];
      out[w] = t;
      on_time += t <= deadline;
    }
    return on_time;
  }
  for (std::size_t w = 0; w < samples_; ++w) {
    const double a = arrivals[w];
    const double t = a > deadline ? a : a + columns_[first + edge.band_index(a)][w];
    out[w] = t;
    on_time += t <= deadline;
  }
  return on_time;
}

ProbabilityEstimate sampling_completion_probability(const SampleBank& bank,
                                                    std::span<const VertexId> path,
                                                    const SolveRequest& request) {
  const std::size_t n = bank.samples();
  std::vector<double> a(n, request.start_time), next(n);
  for (std::size_t i = 1; i < path.size(); ++i) {
    bank.advance(a, path[i - 1], path[i], request.deadline, next);
    a.swap(next);
  }
  ProbabilityEstimate est;
  est.method = EstimatorKind::Sampling;
  est.samples = n;
  for (double t : a)
    if (t <= request.deadline) ++est.successes;
  est.value = static_cast<double>(est.successes) / static_cast<double>(n);
  return est;
}

ProbabilityEstimate sampling_completion_probability(const Instance& instance,
                                                    std::span<const VertexId> path,
                                                    const SolveRequest& request,
                                                    std::size_t samples, std::uint64_t seed) {
  const SampleBank bank(instance, samples, seed, path);
  return sampling_completion_probability(bank, path, request);
}

double expected_utility(const Instance& instance, std::span<const VertexId> path,
                        const SolveRequest& request, std::size_t samples, std::uint64_t seed) {
  if (path.empty()) return 0.0;
  const SampleBank bank(instance, samples, seed, path);
  const double n = static_cast<double>(samples);
  std::vector<double> a(samples, request.start_time), next(samples);

  auto utility_at = [&](VertexId v) {
    std::size_t on_time = 0;
    for (double t : a)
      if (t <= request.deadline) ++on_time;
    const double p = static_cast<double>(on_time) / n;
    const auto& data = instance.vertex(v);
    return p * data.reward - (1.0 - p) * data.penalty;
  };

  double total = utility_at(path[0]);
  for (std::size_t i = 1; i < path.size(); ++i) {
    bank.advance(a, path[i - 1], path[i], request.deadline, next);
    a.swap(next);
    total += utility_at(path[i]);
  }
  return total;
}

}  // namespace dsop
