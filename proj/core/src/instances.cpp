#include <algorithm>
#include <cmath>
#include <random>

#include <boost/random/uniform_int_distribution.hpp>
#include <boost/random/uniform_real_distribution.hpp>

#include "dsop/errors.hpp"
#include "dsop/instances.hpp"
#include "dsop/seeds.hpp"

namespace dsop {

namespace {

using Engine = std::mt19937_64;

double uniform(Engine& rng, double lo, double hi) {
  if (lo == hi) return lo;
  return boost::random::uniform_real_distribution<double>(lo, hi)(rng);
}

int uniform_int(Engine& rng, int lo, int hi) {
  return boost::random::uniform_int_distribution<int>(lo, hi)(rng);
}

std::string pair_name(std::size_t i, std::size_t j) {
  return "(" + std::to_string(i) + ", " + std::to_string(j) + ")";
}

double base_mean(const TimeDependentEdge& e) { return mean(e.bands.front().dist); }

Instance build_gamma_instance(const GeneratorConfig& config, bool hard) {
  const std::size_t n = config.coordinates ? config.coordinates->size() : config.vertex_count;
  if (n < 2) throw ConfigError("generator needs at least 2 vertices");
  if (!hard && !(config.theta >= 1.0 && config.theta <= 4.0))
    throw ConfigError("theta must lie in [1, 4]");
  if (config.band_count == 0) throw ConfigError("band count must be >= 1");
  if (!(config.band_span > 0.0)) throw ConfigError("band span must be > 0");
  if (config.min_reward > config.max_reward) throw ConfigError("empty reward range");

  const auto points =
      config.coordinates ? *config.coordinates
                         : generate_points(n, config.side, derive_seed(config.seed, "points"));

  Engine reward_rng(derive_seed(config.seed, "rewards"));
  std::vector<VertexData> vertices(n);
  for (auto& v : vertices) {
    v.reward = uniform_int(reward_rng, config.min_reward, config.max_reward);
    v.penalty = config.penalty_fraction * v.reward;
  }

  Engine band_rng(derive_seed(config.seed, "bands"));
  Engine theta_rng(derive_seed(config.seed, "theta"));
  std::vector<TimeDependentEdge> edges;
  edges.reserve(n * (n - 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double mu = std::hypot(points[i].x - points[j].x, points[i].y - points[j].y);
      if (!(mu > 0.0))
        throw GenerationError("vertices " + pair_name(i, j) +
                              " coincide; the edge would have zero mean travel time");
      const double theta = hard ? uniform(theta_rng, 1.0, 4.0) : config.theta;
      const auto base = gamma_for_mean(mu, theta, config.min_shape, config.max_shape);

      TimeDependentEdge edge;
      edge.from = VertexId(static_cast<std::uint32_t>(i));
      edge.to = VertexId(static_cast<std::uint32_t>(j));
      edge.bands.push_back({0.0, base});
      for (std::size_t b = 1; b < config.band_count; ++b) {
        const double drift = uniform(band_rng, -config.band_drift, config.band_drift);
        GammaDist g = base;
        g.shape = std::clamp(base.shape * (1.0 + drift), config.min_shape, config.max_shape);
        edge.bands.push_back({static_cast<double>(b) * config.band_span, g});
      }
      edges.push_back(std::move(edge));
    }
  }

  if (hard) {
    Engine subset_rng(derive_seed(config.seed, "inflate"));
    const auto chosen = static_cast<std::size_t>(
        std::llround(config.inflate_fraction * static_cast<double>(edges.size())));
    for (std::size_t attempt = 0;; ++attempt) {
      if (attempt == config.max_retries)
        throw GenerationError("no violated triangle after " + std::to_string(attempt) +
                              " inflation draws");
      std::vector<std::size_t> order(edges.size());
      for (std::size_t e = 0; e < order.size(); ++e) order[e] = e;
      for (std::size_t e = order.size(); e > 1; --e) {
        const auto k = boost::random::uniform_int_distribution<std::size_t>(0, e - 1)(subset_rng);
        std::swap(order[e - 1], order[k]);
      }
      auto trial = edges;
      for (std::size_t c = 0; c < chosen && c < order.size(); ++c) {
        const double factor = uniform(subset_rng, config.inflate_min, config.inflate_max);
        for (auto& band : trial[order[c]].bands)
          band.dist = inflate_gamma(std::get<GammaDist>(band.dist), factor, config.max_shape);
      }
      Instance candidate(vertices, std::move(trial), VertexId(0),
                         VertexId(static_cast<std::uint32_t>(n - 1)));
      if (find_violated_triangle(candidate)) return candidate;
    }
  }

  return Instance(std::move(vertices), std::move(edges), VertexId(0),
                  VertexId(static_cast<std::uint32_t>(n - 1)));
}

}  // namespace

GammaDist gamma_for_mean(double mean, double theta, double min_shape, double max_shape) {
  const double k = std::clamp(mean / theta, min_shape, max_shape);
  return GammaDist{k, mean / k};
}

GammaDist inflate_gamma(const GammaDist& g, double factor, double max_shape) {
  return GammaDist{std::min(g.shape * factor, max_shape), g.scale};
}

std::vector<Point> generate_points(std::size_t count, double side, std::uint64_t seed) {
  Engine rng(seed);
  std::vector<Point> points(count);
  for (auto& p : points) {
    p.x = uniform(rng, 0.0, side);
    p.y = uniform(rng, 0.0, side);
  }
  return points;
}

Instance generate_synthetic(const GeneratorConfig& config) {
  return build_gamma_instance(config, config.hard);
}

Instance generate_hard_variant(const GeneratorConfig& config) {
  if (!config.hard) throw ConfigError("generate_hard_variant requires hard = true");
  return build_gamma_instance(config, true);
}

std::optional<std::array<VertexId, 3>> find_violated_triangle(const Instance& instance) {
  const std::size_t n = instance.vertex_count();
  std::vector<double> mu(n * n, -1.0);
  for (const auto& e : instance.edges()) mu[e.from.index() * n + e.to.index()] = base_mean(e);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < n; ++l) {
      const double direct = mu[i * n + l];
      if (direct < 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i || j == l) continue;
        const double a = mu[i * n + j];
        const double b = mu[j * n + l];
        if (a < 0.0 || b < 0.0) continue;
        if (direct > a + b)
          return std::array<VertexId, 3>{VertexId(static_cast<std::uint32_t>(i)),
                                         VertexId(static_cast<std::uint32_t>(j)),
                                         VertexId(static_cast<std::uint32_t>(l))};
      }
    }
  return std::nullopt;
}

Instance generate_oracle_instance(const OracleConfig& config) {
  const std::size_t n = config.vertex_count;
  if (n < 2 || n > kMaxOracleVertices)
    throw ConfigError("oracle instances need 2.." + std::to_string(kMaxOracleVertices) +
                      " vertices");
  if (config.outcomes_per_edge < 1 || config.outcomes_per_edge > 3)
    throw ConfigError("oracle instances need 1..3 outcomes per edge");
  if (config.band_count < 1 || config.band_count > 2)
    throw ConfigError("oracle instances need 1..2 bands");
  if (!(config.min_time >= 0.0 && config.max_time >= config.min_time))
    throw ConfigError("invalid oracle support range");

  Engine rng(config.seed);
  std::vector<VertexData> vertices(n);
  for (auto& v : vertices) {
    v.reward = uniform_int(rng, 1, 100);
    v.penalty = uniform_int(rng, 0, 50);
  }

  auto draw_time = [&] {
    double t = uniform(rng, config.min_time, config.max_time);
    if (config.time_step > 0.0) {
      t = std::round(t / config.time_step) * config.time_step;
      t = std::clamp(t, std::ceil(config.min_time / config.time_step) * config.time_step,
                     std::floor(config.max_time / config.time_step) * config.time_step);
    }
    return t;
  };
  auto draw_dist = [&] {
    DiscreteDist d;
    std::vector<double> weights(config.outcomes_per_edge);
    double total = 0.0;
    for (auto& w : weights) {
      w = uniform(rng, 0.1, 1.0);
      total += w;
    }
    for (double w : weights) d.outcomes.push_back({draw_time(), w / total});
    return d;
  };

  const int max_units =
      std::max(1, static_cast<int>(std::floor(config.max_band_start / config.band_unit)));
  std::vector<TimeDependentEdge> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      TimeDependentEdge edge;
      edge.from = VertexId(static_cast<std::uint32_t>(i));
      edge.to = VertexId(static_cast<std::uint32_t>(j));
      edge.bands.push_back({0.0, draw_dist()});
      if (config.band_count == 2) {
        const double start = config.band_unit * uniform_int(rng, 1, max_units);
        DiscreteDist late = draw_dist();
        for (int retry = 0; retry < 16 && Distribution(late) == edge.bands[0].dist; ++retry)
          late = draw_dist();
        edge.bands.push_back({start, late});
      }
      edges.push_back(std::move(edge));
    }
  return Instance(std::move(vertices), std::move(edges), VertexId(0),
                  VertexId(static_cast<std::uint32_t>(n - 1)));
}

}  // namespace dsop
