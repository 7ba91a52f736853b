#include <algorithm>
#include <chrono>
#include <cmath>

#include <boost/random/uniform_01.hpp>
#include <boost/random/uniform_int_distribution.hpp>

#include "dsop/errors.hpp"
#include "dsop/seeds.hpp"
#include "dsop/solver.hpp"

namespace dsop {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double uniform01(Rng& rng) { return boost::random::uniform_01<double>()(rng); }

std::size_t uniform_index(Rng& rng, std::size_t lo, std::size_t hi) {
  return boost::random::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

bool edges_exist(const Instance& instance, std::span<const VertexId> path) {
  for (std::size_t i = 1; i < path.size(); ++i)
    if (!instance.find_edge(path[i - 1], path[i])) return false;
  return true;
}

Solution make_solution(const Estimator& estimator, Path path, double runtime) {
  Solution s;
  s.reward = path_reward(estimator.instance(), path);
  s.completion_probability = estimator.estimate(path).value;
  s.estimator = estimator.kind();
  s.path = std::move(path);
  s.runtime_seconds = runtime;
  return s;
}

template <class Propagator>
class Search {
 public:
  using Cache = PrefixCache<Propagator>;

  Search(const Estimator& estimator, const Propagator& prop, double epsilon)
      : instance_(estimator.instance()),
        prop_(prop),
        threshold_(feasibility_threshold(epsilon)) {}

  bool feasible(const Cache& cache) const {
    return edges_exist(instance_, cache.path()) && cache.completion() >= threshold_;
  }

  Cache start_cache() const {
    const Path base{instance_.start(), instance_.exit()};
    Cache cache(prop_, base);
    if (!feasible(cache))
      throw NoFeasibleSolution("the direct path from start to exit violates the chance constraint");
    return cache;
  }

  void insert_greedily(Cache& cache, InsertionMetric metric) const {
    const std::size_t n = instance_.vertex_count();
    std::vector<char> visited(n, 0);
    for (auto v : cache.path()) visited[v.index()] = 1;

    for (;;) {
      const double before = cache.completion();
      const auto& path = cache.path();
      bool found = false;
      double best_value = 0.0;
      VertexId best_vertex;
      std::size_t best_pos = 0;

      for (std::uint32_t i = 0; i < n; ++i) {
        const VertexId v(i);
        if (visited[i] || v == instance_.start() || v == instance_.exit()) continue;
        const double gain = instance_.vertex(v).reward;
        // Every metric is non-increasing in the loss, so the metric at a
        // partial completion bounds the final one. Candidates that cannot
        // strictly beat the incumbent are dropped early; ties keep the
        // incumbent, which already has the lower index or position.
        auto promising = [&](double partial) {
          return partial >= threshold_ &&
                 (!found || metric_value(metric, gain, std::max(0.0, before - partial)) >
                                best_value);
        };
        if (!promising(before)) continue;
        for (std::size_t pos = 1; pos < path.size(); ++pos) {
          if (!instance_.find_edge(path[pos - 1], v) || !instance_.find_edge(v, path[pos]))
            continue;
          const auto after = cache.probe_insert(v, pos, promising);
          if (!after) continue;
          const double value = metric_value(metric, gain, std::max(0.0, before - *after));
          if (!found || value > best_value) {
            found = true;
            best_value = value;
            best_vertex = v;
            best_pos = pos;
          }
        }
      }
      if (!found) return;
      cache.apply(InsertEdit{best_vertex, best_pos});
      visited[best_vertex.index()] = 1;
    }
  }

  void remove(Cache& cache, double z, Rng& rng) const {
    for (;;) {
      if (cache.path().size() <= 2) {
        if (!feasible(cache))
          throw NoFeasibleSolution(
              "the direct path from start to exit violates the chance constraint");
        return;
      }
      if (!feasible(cache) || uniform01(rng) <= z) {
        cache.apply(RemoveSecondLastEdit{});
        continue;
      }
      return;
    }
  }

  Solution branch_and_bound(const Estimator& estimator, const SearchConfig& config) const {
    const auto t0 = Clock::now();
    std::vector<VertexId> order;
    for (std::uint32_t i = 0; i < instance_.vertex_count(); ++i) {
      const VertexId v(i);
      if (v != instance_.start() && v != instance_.exit()) order.push_back(v);
    }
    std::stable_sort(order.begin(), order.end(), [&](VertexId a, VertexId b) {
      return instance_.vertex(a).reward > instance_.vertex(b).reward;
    });

    Bnb state{*this, order, config.node_budget, 0, {}, {}, {}, -1.0};
    state.visited.assign(instance_.vertex_count(), 0);
    state.visited[instance_.start().index()] = 1;
    state.prefix.push_back(instance_.start());
    const auto root = prop_.initial();
    try {
      if (!state.expand(root))
        throw NoFeasibleSolution(
            "the direct path from start to exit violates the chance constraint");
    } catch (const BudgetExhausted&) {
      throw Timeout("branch-and-bound node budget of " + std::to_string(config.node_budget) +
                        " exhausted",
                    make_solution(estimator, state.best, seconds_since(t0)));
    }
    return make_solution(estimator, state.best, seconds_since(t0));
  }

 private:
  struct BudgetExhausted {};

  struct Bnb {
    const Search& search;
    const std::vector<VertexId>& order;
    std::uint64_t budget;
    std::uint64_t nodes = 0;
    std::vector<char> visited;
    Path prefix;
    Path best;
    double best_reward = -1.0;

    // Returns false when the branch is pruned.
    bool expand(const typename Propagator::State& state) {
      const auto& inst = search.instance_;
      const VertexId last = prefix.back();
      if (!inst.find_edge(last, inst.exit())) return false;
      typename Propagator::State closing;
      if (search.prop_.advance(state, last, inst.exit(), closing) < search.threshold_)
        return false;

      if (++nodes > budget) throw BudgetExhausted{};
      double reward = path_reward(inst, prefix);
      if (inst.exit() != inst.start()) reward += inst.vertex(inst.exit()).reward;
      if (reward > best_reward) {
        best_reward = reward;
        best = prefix;
        best.push_back(inst.exit());
      }

      typename Propagator::State child_state;
      for (const auto child : order) {
        if (visited[child.index()] || !inst.find_edge(last, child)) continue;
        search.prop_.advance(state, last, child, child_state);
        visited[child.index()] = 1;
        prefix.push_back(child);
        expand(child_state);
        prefix.pop_back();
        visited[child.index()] = 0;
      }
      return true;
    }
  };

  const Instance& instance_;
  const Propagator& prop_;
  double threshold_;

 public:
  SearchResult local_search(const Estimator& estimator, const SearchConfig& config) const {
    const auto t0 = Clock::now();
    Rng rng(derive_seed(config.seed, "search"));

    Cache current = start_cache();
    insert_greedily(current, InsertionMetric::RatioR_P);

    SearchResult result;
    result.construction = make_solution(estimator, current.path(), seconds_since(t0));

    Path best = current.path();
    double best_reward = path_reward(instance_, best);
    std::size_t no_improve = 0;
    auto metric = kAllMetrics[uniform_index(rng, 0, kAllMetrics.size() - 1)];
    double temperature = config.initial_temperature;

    for (std::size_t it = 1; it <= config.max_iterations; ++it) {
      temperature *= config.cooling;
      const double z = static_cast<double>(no_improve) /
                       (2.0 * static_cast<double>(config.max_iter_no_improve));

      const auto& path = current.path();
      if (path.size() >= 4) {
        const std::size_t interior = path.size() - 2;
        const std::size_t i = uniform_index(rng, 1, interior);
        std::size_t j = uniform_index(rng, 1, interior - 1);
        if (j >= i) ++j;
        Path swapped = path;
        std::swap(swapped[i], swapped[j]);
        if (edges_exist(instance_, swapped)) current.apply(SwapEdit{i, j});
      }

      remove(current, z, rng);
      const double current_reward = path_reward(instance_, current.path());

      Cache neighbor = current;
      insert_greedily(neighbor, metric);
      const double delta = path_reward(instance_, neighbor.path()) - current_reward;
      if (sa_accept(delta, temperature, rng)) current = std::move(neighbor);

      const double reward = path_reward(instance_, current.path());
      if (reward > best_reward) {
        best = current.path();
        best_reward = reward;
        no_improve = 0;
      } else if (++no_improve > config.max_iter_no_improve) {
        const auto k = static_cast<std::size_t>(metric);
        std::size_t pick = uniform_index(rng, 0, kAllMetrics.size() - 2);
        if (pick >= k) ++pick;
        metric = kAllMetrics[pick];
        no_improve = 0;
      }
      result.iterations = it;
    }

    result.final_temperature = temperature;
    result.best = make_solution(estimator, std::move(best), seconds_since(t0));
    return result;
  }
};

template <class F>
decltype(auto) with_search(const Estimator& estimator, double epsilon, F&& f) {
  return estimator.visit([&](const auto& prop) {
    using Prop = std::decay_t<decltype(prop)>;
    const Search<Prop> search(estimator, prop, epsilon);
    return f(search, prop);
  });
}

}  // namespace

std::string to_string(InsertionMetric metric) {
  switch (metric) {
    case InsertionMetric::RatioR_P:
      return "ratio";
    case InsertionMetric::InvP:
      return "inv-p";
    case InsertionMetric::RewardOnly:
      return "reward";
    case InsertionMetric::RewardSq_P:
      return "reward-sq";
    case InsertionMetric::Ratio_SqrtP:
      return "ratio-sqrt";
  }
  return "unknown";
}

double metric_value(InsertionMetric metric, double reward_gain, double probability_loss) {
  const double denom = 1.0 + probability_loss;
  switch (metric) {
    case InsertionMetric::RatioR_P:
      return reward_gain / denom;
    case InsertionMetric::InvP:
      return 1.0 / denom;
    case InsertionMetric::RewardOnly:
      return reward_gain;
    case InsertionMetric::RewardSq_P:
      return reward_gain * reward_gain / denom;
    case InsertionMetric::Ratio_SqrtP:
      return reward_gain / std::sqrt(denom);
  }
  return 0.0;
}

InsertionScore evaluate_insertion(double reward_gain, double probability_before,
                                  double probability_after) {
  InsertionScore s;
  s.reward_gain = reward_gain;
  s.probability_loss = std::max(0.0, probability_before - probability_after);
  for (std::size_t i = 0; i < kAllMetrics.size(); ++i)
    s.values[i] = metric_value(kAllMetrics[i], s.reward_gain, s.probability_loss);
  return s;
}

Path two_opt(Path path, Rng& rng) {
  if (path.size() < 4) return path;
  const std::size_t interior = path.size() - 2;
  const std::size_t i = uniform_index(rng, 1, interior);
  std::size_t j = uniform_index(rng, 1, interior - 1);
  if (j >= i) ++j;
  std::swap(path[i], path[j]);
  return path;
}

bool sa_accept(double reward_delta, double temperature, Rng& rng) {
  if (reward_delta > 0.0) return true;
  return uniform01(rng) <= std::exp(reward_delta / temperature);
}

Path construction_heuristic(const Estimator& estimator, double epsilon, InsertionMetric metric) {
  return with_search(estimator, epsilon, [&](const auto& search, const auto&) {
    auto cache = search.start_cache();
    search.insert_greedily(cache, metric);
    return cache.path();
  });
}

Path construction_heuristic(const Instance& instance, const SolveRequest& request,
                            const SearchConfig& config, InsertionMetric metric) {
  const auto estimator = Estimator::from_config(instance, request, config);
  return construction_heuristic(estimator, request.epsilon, metric);
}

Path insertion_phase(const Estimator& estimator, double epsilon, Path path,
                     InsertionMetric metric) {
  return with_search(estimator, epsilon, [&](const auto& search, const auto& prop) {
    using Prop = std::decay_t<decltype(prop)>;
    PrefixCache<Prop> cache(prop, std::move(path));
    search.insert_greedily(cache, metric);
    return cache.path();
  });
}

Path removal_phase(const Estimator& estimator, double epsilon, Path path, double z, Rng& rng) {
  return with_search(estimator, epsilon, [&](const auto& search, const auto& prop) {
    using Prop = std::decay_t<decltype(prop)>;
    PrefixCache<Prop> cache(prop, std::move(path));
    search.remove(cache, z, rng);
    return cache.path();
  });
}

SearchResult run_local_search(const Estimator& estimator, double epsilon,
                              const SearchConfig& config) {
  return with_search(estimator, epsilon, [&](const auto& search, const auto&) {
    return search.local_search(estimator, config);
  });
}

Solution local_search(const Instance& instance, const SolveRequest& request,
                      const SearchConfig& config) {
  const auto estimator = Estimator::from_config(instance, request, config);
  return run_local_search(estimator, request.epsilon, config).best;
}

Solution branch_and_bound(const Estimator& estimator, double epsilon, const SearchConfig& config) {
  return with_search(estimator, epsilon, [&](const auto& search, const auto&) {
    return search.branch_and_bound(estimator, config);
  });
}

Solution branch_and_bound(const Instance& instance, const SolveRequest& request,
                          const SearchConfig& config) {
  const auto estimator = Estimator::from_config(instance, request, config);
  return branch_and_bound(estimator, request.epsilon, config);
}

std::string to_string(Method method) {
  switch (method) {
    case Method::ConstructionHeuristic:
      return "CH";
    case Method::LocalSearch:
      return "LS";
    case Method::BranchAndBound:
      return "BnB";
  }
  return "unknown";
}

Method method_from_string(const std::string& name) {
  if (name == "CH" || name == "ch") return Method::ConstructionHeuristic;
  if (name == "LS" || name == "ls") return Method::LocalSearch;
  if (name == "BnB" || name == "bnb") return Method::BranchAndBound;
  throw ConfigError("unknown method '" + name + "'");
}

Solution solve(Method method, const Estimator& estimator, double epsilon,
               const SearchConfig& config) {
  switch (method) {
    case Method::ConstructionHeuristic: {
      const auto t0 = Clock::now();
      auto path = construction_heuristic(estimator, epsilon, InsertionMetric::RatioR_P);
      return make_solution(estimator, std::move(path), seconds_since(t0));
    }
    case Method::LocalSearch:
      return run_local_search(estimator, epsilon, config).best;
    case Method::BranchAndBound:
      return branch_and_bound(estimator, epsilon, config);
  }
  throw ConfigError("unknown method");
}

}  // namespace dsop
