#include "dsop_app/verify.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>

#include <boost/random/uniform_int_distribution.hpp>
#include <fmt/format.h>

#include "dsop/estimator.hpp"
#include "dsop/exact.hpp"
#include "dsop/instances.hpp"
#include "dsop/sampling.hpp"
#include "dsop/seeds.hpp"

namespace dsop::app {

namespace {

std::size_t pick(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return boost::random::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

// Random start-to-exit path through a random ordered subset of the interior.
Path random_path(const Instance& instance, std::mt19937_64& rng) {
  std::vector<VertexId> interior;
  for (std::uint32_t v = 0; v < instance.vertex_count(); ++v)
    if (VertexId(v) != instance.start() && VertexId(v) != instance.exit())
      interior.emplace_back(v);
  for (std::size_t i = interior.size(); i > 1; --i) std::swap(interior[i - 1], interior[pick(rng, 0, i - 1)]);
  interior.resize(pick(rng, 0, interior.size()));
  Path path{instance.start()};
  path.insert(path.end(), interior.begin(), interior.end());
  path.push_back(instance.exit());
  return path;
}

}  // namespace

VerifyReport run_verify(const VerifyOptions& options) {
  VerifyReport report;
  const double three_sigma = 3.0 * std::sqrt(0.25 / static_cast<double>(options.samples));
  for (std::size_t trial = 0; trial < options.trials; ++trial) {
    const std::uint64_t trial_seed = derive_seed(options.seed + trial, "verify");
    std::mt19937_64 rng(trial_seed);

    OracleConfig oc;
    oc.vertex_count = pick(rng, options.min_vertices, options.max_vertices);
    oc.outcomes_per_edge = pick(rng, 1, 3);
    oc.band_count = 2;
    oc.seed = derive_seed(trial_seed, "instance");
    const Instance instance = generate_oracle_instance(oc);
    if (std::ranges::any_of(instance.edges(), [](const auto& e) { return e.is_dynamic(); }))
      ++report.dynamic_instances;

    for (std::size_t k = 0; k < options.paths_per_trial; ++k) {
      const Path path = random_path(instance, rng);
      const std::size_t hops = path.size() - 1;
      // Integer deadlines keep every band start (an integer) on the grid.
      const auto deadline = static_cast<double>(pick(rng, hops, 7 * hops / 2));
      const SolveRequest request{deadline, 0.0, 0.0};

      const double exact = exact_completion_probability(instance, path, request).value;
      const double matrix =
          matrix_completion_probability(instance, path, request, options.range_count).value;
      const double sampled = sampling_completion_probability(
                                 instance, path, request, options.samples,
                                 derive_seed(trial_seed, "walks-" + std::to_string(k)))
                                 .value;

      ++report.cases;
      const double excess = matrix - exact;
      if (report.cases == 1 || excess > report.worst_matrix_excess) report.worst_matrix_excess = excess;
      if (excess > 1e-9) ++report.conservativeness_violations;
      const double error = std::abs(sampled - exact);
      report.max_sampling_error = std::max(report.max_sampling_error, error);
      if (error <= options.sampling_tolerance) ++report.sampling_within_tolerance;
      if (error <= three_sigma) ++report.sampling_within_three_sigma;
    }
  }
  return report;
}

void write_verify_report(std::ostream& out, const VerifyOptions& options,
                         const VerifyReport& report) {
  out << fmt::format("trials: {} ({} with a dynamic edge)\n", options.trials,
                     report.dynamic_instances);
  out << fmt::format("cases: {}\n", report.cases);
  out << fmt::format("conservativeness violations (matrix > exact + 1e-9): {}\n",
                     report.conservativeness_violations);
  out << fmt::format("max matrix - exact: {:.3e}\n", report.worst_matrix_excess);
  out << fmt::format("sampling within {}: {}/{} ({:.2f}%)\n", options.sampling_tolerance,
                     report.sampling_within_tolerance, report.cases,
                     100.0 * report.sampling_share());
  out << fmt::format("sampling within 3*sqrt(0.25/N): {}/{} ({:.2f}%)\n",
                     report.sampling_within_three_sigma, report.cases,
                     100.0 * report.three_sigma_share());
  out << fmt::format("max |sampling - exact|: {:.4f}\n", report.max_sampling_error);
  out << (report.passed(options) ? "result: PASS\n" : "result: FAIL\n");
}

}  // namespace dsop::app
