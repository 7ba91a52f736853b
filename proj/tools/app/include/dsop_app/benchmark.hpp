#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dsop/model.hpp"
#include "dsop/solver.hpp"

namespace dsop::app {

inline constexpr const char* kCsvVersionLine = "# dsop-benchmark v1";
inline constexpr const char* kCsvHeader =
    "instance_id,method,estimator,H,epsilon,theta,reward,prob_matrix,prob_sampling,runtime_s,seed";

enum class Variant { Simple, Hard };

std::string to_string(Variant variant);
Variant variant_from_string(const std::string& name);

struct BenchmarkOptions {
  std::vector<double> deadlines{20, 40, 60, 80, 100};
  std::vector<double> epsilons{0.1, 0.2, 0.3, 0.4, 0.5};
  /// Fixed scales for the simple variant; the hard variant draws per edge.
  std::vector<double> thetas{2.0};
  std::vector<Method> methods{Method::ConstructionHeuristic, Method::LocalSearch};
  std::vector<EstimatorKind> estimators{EstimatorKind::Matrix, EstimatorKind::Sampling};
  std::vector<Variant> variants{Variant::Simple, Variant::Hard};
  std::size_t repetitions = 5;
  std::uint64_t seed = 0;
  std::size_t vertices = 32;
  double side = 25.0;
  SearchConfig search = default_search();
  /// Walk count used for the prob_sampling cross-check column.
  std::size_t check_samples = 10'000;
  bool record_runtime = false;

  static SearchConfig default_search() {
    SearchConfig c;
    c.sample_count = 200;
    return c;
  }
};

struct BenchmarkRow {
  std::string instance_id;
  Method method = Method::LocalSearch;
  EstimatorKind estimator = EstimatorKind::Matrix;
  double deadline = 0.0;
  double epsilon = 0.0;
  std::string theta;  // number, or "random" for the hard variant
  /// Empty path and probabilities mark a cell without a feasible solution.
  Path path;
  double reward = 0.0;
  std::optional<double> prob_matrix;
  std::optional<double> prob_sampling;
  double runtime_s = 0.0;
  std::uint64_t seed = 0;

  /// Rows read back from CSV carry no path, but every solved row has a
  /// prob_sampling value and unsolved rows have none.
  bool solved() const { return !path.empty() || prob_sampling.has_value(); }
  /// Sort and lookup key; also the paths.json key.
  std::string key() const;
};

struct BenchmarkResult {
  std::vector<BenchmarkRow> rows;  // sorted by key
  std::map<std::string, Instance> instances;
  double wall_seconds = 0.0;
  double max_local_search_seconds = 0.0;
  std::size_t timeouts = 0;
};

/// Runs the sweep. When `progress` is given, one line per finished cell is
/// written to it.
BenchmarkResult run_benchmark(const BenchmarkOptions& options, std::ostream* progress = nullptr);

/// Cross-check sampling estimate for a row, drawn with the row seed's
/// "check" sub-seed.
double check_sampling(const Instance& instance, const Path& path, double deadline,
                      std::size_t samples, std::uint64_t row_seed);

void write_csv(std::ostream& out, const std::vector<BenchmarkRow>& rows, bool record_runtime);
/// Parses a CSV produced by write_csv. Paths are left empty.
std::vector<BenchmarkRow> read_csv(std::istream& in);

/// Writes results.csv, paths.json, summary.txt and instances/<id>.json.
void write_benchmark_dir(const std::filesystem::path& dir, const BenchmarkOptions& options,
                         const BenchmarkResult& result);

struct RescoreReport {
  std::size_t rows = 0;
  std::size_t mismatches = 0;
  std::vector<std::string> messages;
};

/// Recomputes reward and both probability columns of every row in a
/// directory written by write_benchmark_dir from the stored paths and
/// instances. Matrix values must agree within 1e-9, sampling values exactly.
RescoreReport rescore_benchmark_dir(const std::filesystem::path& dir);

struct SummaryLine {
  std::string group;      // "<variant>/<estimator>"
  std::string dimension;  // "theta", "H", "epsilon" or "all"
  std::string value;
  double ch_reward = 0.0;
  double ls_reward = 0.0;
  /// Mean of (LS - CH) / CH over cells where both exist and CH > 0, in percent.
  double improvement_pct = 0.0;
  double ls_prob_matrix = 0.0;
  double ls_prob_sampling = 0.0;
  std::size_t cells = 0;
};

/// Means per dimension for every variant and estimator. Unsolved cells count
/// as reward 0 and are left out of the probability and improvement means.
std::vector<SummaryLine> summarize(const std::vector<BenchmarkRow>& rows);
void write_summary(std::ostream& out, const std::vector<SummaryLine>& lines);

}  // namespace dsop::app
