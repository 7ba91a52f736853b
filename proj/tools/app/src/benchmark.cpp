#include "dsop_app/benchmark.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <tuple>

#include <fmt/format.h>

#include <json.hpp>

#include "dsop/errors.hpp"
#include "dsop/estimator.hpp"
#include "dsop/instance_io.hpp"
#include "dsop/instances.hpp"
#include "dsop/sampling.hpp"
#include "dsop/seeds.hpp"

namespace dsop::app {

namespace {

using Clock = std::chrono::steady_clock;
using json = nlohmann::ordered_json;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

auto sort_tuple(const BenchmarkRow& r) {
  return std::make_tuple(r.instance_id, to_string(r.method), to_string(r.estimator), r.deadline,
                         r.epsilon);
}

std::string optional_number(const std::optional<double>& v) {
  return v ? fmt::format("{}", *v) : std::string();
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ParseError(what, "invalid number '" + text + "'");
  }
}

std::string variant_of(const BenchmarkRow& row) {
  return row.instance_id.substr(0, row.instance_id.find('-'));
}

json search_to_json(const SearchConfig& c) {
  return json{{"max_iterations", c.max_iterations},
              {"max_iter_no_improve", c.max_iter_no_improve},
              {"initial_temperature", c.initial_temperature},
              {"cooling", c.cooling},
              {"range_count", c.range_count},
              {"sample_count", c.sample_count},
              {"max_grid_refinement", c.max_grid_refinement},
              {"interior_probes", c.interior_probes},
              {"node_budget", c.node_budget}};
}

SearchConfig search_from_json(const json& j) {
  SearchConfig c;
  c.max_iterations = j.at("max_iterations").get<std::size_t>();
  c.max_iter_no_improve = j.at("max_iter_no_improve").get<std::size_t>();
  c.initial_temperature = j.at("initial_temperature").get<double>();
  c.cooling = j.at("cooling").get<double>();
  c.range_count = j.at("range_count").get<std::size_t>();
  c.sample_count = j.at("sample_count").get<std::size_t>();
  c.max_grid_refinement = j.at("max_grid_refinement").get<std::size_t>();
  c.interior_probes = j.at("interior_probes").get<std::size_t>();
  c.node_budget = j.at("node_budget").get<std::uint64_t>();
  return c;
}

}  // namespace

std::string to_string(Variant variant) { return variant == Variant::Hard ? "hard" : "simple"; }

Variant variant_from_string(const std::string& name) {
  if (name == "simple") return Variant::Simple;
  if (name == "hard") return Variant::Hard;
  throw ConfigError("unknown variant '" + name + "'");
}

std::string BenchmarkRow::key() const {
  return fmt::format("{}/{}/{}/{}/{}", instance_id, to_string(method), to_string(estimator),
                     deadline, epsilon);
}

double check_sampling(const Instance& instance, const Path& path, double deadline,
                      std::size_t samples, std::uint64_t row_seed) {
  return sampling_completion_probability(instance, path, SolveRequest{deadline, 0.0, 0.0}, samples,
                                         derive_seed(row_seed, "check"))
      .value;
}

BenchmarkResult run_benchmark(const BenchmarkOptions& options, std::ostream* progress) {
  if (options.repetitions == 0) throw ConfigError("repetitions must be >= 1");
  const auto wall0 = Clock::now();
  const bool want_ch = std::ranges::count(options.methods, Method::ConstructionHeuristic) > 0;
  const bool want_ls = std::ranges::count(options.methods, Method::LocalSearch) > 0;
  const bool want_bnb = std::ranges::count(options.methods, Method::BranchAndBound) > 0;

  BenchmarkResult result;
  for (const Variant variant : options.variants) {
    const bool hard = variant == Variant::Hard;
    const std::vector<double> thetas = hard ? std::vector<double>{0.0} : options.thetas;
    for (const double theta : thetas) {
      for (std::size_t r = 0; r < options.repetitions; ++r) {
        const std::uint64_t seed = options.seed + r;
        GeneratorConfig g;
        g.vertex_count = options.vertices;
        g.side = options.side;
        g.theta = hard ? 2.0 : theta;
        g.hard = hard;
        g.seed = seed;
        const std::string id =
            hard ? fmt::format("hard-s{}", seed) : fmt::format("simple-t{}-s{}", theta, seed);
        const Instance& instance =
            result.instances.emplace(id, hard ? generate_hard_variant(g) : generate_synthetic(g))
                .first->second;
        const std::string theta_label = hard ? "random" : fmt::format("{}", theta);

        for (const double deadline : options.deadlines) {
          const SolveRequest request{deadline, 0.0, 0.0};
          SearchConfig base = options.search;
          base.seed = seed;
          const auto matrix = Estimator::matrix(instance, request, base);

          auto add_row = [&](Method method, EstimatorKind kind, double epsilon,
                             const Solution* solution) {
            BenchmarkRow row;
            row.instance_id = id;
            row.method = method;
            row.estimator = kind;
            row.deadline = deadline;
            row.epsilon = epsilon;
            row.theta = theta_label;
            row.seed = seed;
            if (solution) {
              row.path = solution->path;
              row.reward = solution->reward;
              row.prob_matrix = matrix.estimate(row.path).value;
              row.prob_sampling =
                  check_sampling(instance, row.path, deadline, options.check_samples, seed);
              row.runtime_s = solution->runtime_seconds;
            }
            result.rows.push_back(std::move(row));
          };

          for (const EstimatorKind kind : options.estimators) {
            SearchConfig config = base;
            config.estimator = kind;
            const auto estimator =
                kind == EstimatorKind::Matrix ? matrix : Estimator::from_config(instance, request, config);
            for (const double epsilon : options.epsilons) {
              const auto cell0 = Clock::now();
              if (want_ls) {
                try {
                  const auto run = run_local_search(estimator, epsilon, config);
                  result.max_local_search_seconds =
                      std::max(result.max_local_search_seconds, run.best.runtime_seconds);
                  if (want_ch) add_row(Method::ConstructionHeuristic, kind, epsilon, &run.construction);
                  add_row(Method::LocalSearch, kind, epsilon, &run.best);
                } catch (const NoFeasibleSolution&) {
                  if (want_ch) add_row(Method::ConstructionHeuristic, kind, epsilon, nullptr);
                  add_row(Method::LocalSearch, kind, epsilon, nullptr);
                }
              } else if (want_ch) {
                try {
                  const auto s = solve(Method::ConstructionHeuristic, estimator, epsilon, config);
                  add_row(Method::ConstructionHeuristic, kind, epsilon, &s);
                } catch (const NoFeasibleSolution&) {
                  add_row(Method::ConstructionHeuristic, kind, epsilon, nullptr);
                }
              }
              if (want_bnb) {
                try {
                  const auto s = branch_and_bound(estimator, epsilon, config);
                  add_row(Method::BranchAndBound, kind, epsilon, &s);
                } catch (const Timeout& t) {
                  ++result.timeouts;
                  add_row(Method::BranchAndBound, kind, epsilon, &t.best());
                } catch (const NoFeasibleSolution&) {
                  add_row(Method::BranchAndBound, kind, epsilon, nullptr);
                }
              }
              if (progress)
                *progress << fmt::format("{} {} H={} eps={} done in {:.2f}s\n", id, to_string(kind),
                                         deadline, epsilon, seconds_since(cell0))
                          << std::flush;
            }
          }
        }
      }
    }
  }
  std::ranges::sort(result.rows, [](const BenchmarkRow& a, const BenchmarkRow& b) {
    return sort_tuple(a) < sort_tuple(b);
  });
  result.wall_seconds = seconds_since(wall0);
  return result;
}

void write_csv(std::ostream& out, const std::vector<BenchmarkRow>& rows, bool record_runtime) {
  out << kCsvVersionLine << '\n' << kCsvHeader << '\n';
  for (const auto& r : rows) {
    out << fmt::format("{},{},{},{},{},{},{},{},{},{},{}\n", r.instance_id, to_string(r.method),
                       to_string(r.estimator), r.deadline, r.epsilon, r.theta, r.reward,
                       optional_number(r.prob_matrix), optional_number(r.prob_sampling),
                       record_runtime ? r.runtime_s : 0.0, r.seed);
  }
}

std::vector<BenchmarkRow> read_csv(std::istream& in) {
  std::vector<BenchmarkRow> rows;
  std::string line;
  bool header_seen = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (line != kCsvHeader) throw ParseError("line " + std::to_string(line_no), "unexpected CSV header");
      header_seen = true;
      continue;
    }
    const auto cells = split(line, ',');
    if (cells.size() != 11)
      throw ParseError(fmt::format("line {}", line_no),
                       fmt::format("expected 11 columns, found {}", cells.size()));
    BenchmarkRow row;
    row.instance_id = cells[0];
    row.method = method_from_string(cells[1]);
    row.estimator = estimator_from_string(cells[2]);
    row.deadline = parse_double(cells[3], "H");
    row.epsilon = parse_double(cells[4], "epsilon");
    row.theta = cells[5];
    row.reward = parse_double(cells[6], "reward");
    if (!cells[7].empty()) row.prob_matrix = parse_double(cells[7], "prob_matrix");
    if (!cells[8].empty()) row.prob_sampling = parse_double(cells[8], "prob_sampling");
    row.runtime_s = parse_double(cells[9], "runtime_s");
    row.seed = std::stoull(cells[10]);
    rows.push_back(std::move(row));
  }
  if (!header_seen) throw ParseError("line 1", "missing CSV header");
  return rows;
}

void write_benchmark_dir(const std::filesystem::path& dir, const BenchmarkOptions& options,
                         const BenchmarkResult& result) {
  std::filesystem::create_directories(dir / "instances");
  {
    std::ofstream csv(dir / "results.csv", std::ios::binary);
    write_csv(csv, result.rows, options.record_runtime);
  }
  json paths = json::object();
  for (const auto& row : result.rows) {
    json p = json::array();
    for (const auto v : row.path) p.push_back(v.value);
    paths[row.key()] = row.solved() ? p : json(nullptr);
  }
  const json meta{{"search", search_to_json(options.search)},
                  {"check_samples", options.check_samples},
                  {"paths", std::move(paths)}};
  {
    std::ofstream out(dir / "paths.json", std::ios::binary);
    out << meta.dump(1) << '\n';
  }
  for (const auto& [id, instance] : result.instances)
    write_instance_file(dir / "instances" / (id + ".json"), instance);
  std::ofstream summary(dir / "summary.txt", std::ios::binary);
  write_summary(summary, summarize(result.rows));
}

RescoreReport rescore_benchmark_dir(const std::filesystem::path& dir) {
  std::ifstream csv(dir / "results.csv");
  if (!csv) throw Error("cannot open " + (dir / "results.csv").string());
  auto rows = read_csv(csv);
  std::ifstream meta_in(dir / "paths.json");
  if (!meta_in) throw Error("cannot open " + (dir / "paths.json").string());
  json meta;
  try {
    meta = json::parse(meta_in);
  } catch (const json::exception& e) {
    throw ParseError("paths.json", e.what());
  }
  const SearchConfig search = search_from_json(meta.at("search"));
  const auto check_samples = meta.at("check_samples").get<std::size_t>();
  const json& paths = meta.at("paths");

  std::map<std::string, Instance> instances;
  std::map<std::pair<std::string, double>, Estimator> matrices;
  RescoreReport report;
  auto mismatch = [&](const BenchmarkRow& row, const std::string& what) {
    ++report.mismatches;
    report.messages.push_back(row.key() + ": " + what);
  };

  for (const auto& row : rows) {
    ++report.rows;
    const auto it = paths.find(row.key());
    if (it == paths.end()) {
      mismatch(row, "no stored path");
      continue;
    }
    if (it->is_null()) {
      if (row.prob_matrix || row.prob_sampling) mismatch(row, "probabilities without a path");
      continue;
    }
    Path path;
    for (const auto& v : *it) path.emplace_back(v.get<std::uint32_t>());

    auto inst_it = instances.find(row.instance_id);
    if (inst_it == instances.end())
      inst_it = instances
                    .emplace(row.instance_id,
                             read_instance_file(dir / "instances" / (row.instance_id + ".json")))
                    .first;
    const Instance& instance = inst_it->second;
    if (!check_path(instance, path).empty()) {
      mismatch(row, "stored path is not a valid path");
      continue;
    }

    const double reward = path_reward(instance, path);
    if (std::abs(reward - row.reward) > 1e-9)
      mismatch(row, fmt::format("reward {} != {}", reward, row.reward));

    const auto key = std::make_pair(row.instance_id, row.deadline);
    auto m_it = matrices.find(key);
    if (m_it == matrices.end())
      m_it = matrices
                 .emplace(key, Estimator::matrix(instance, SolveRequest{row.deadline, 0.0, 0.0},
                                                 search))
                 .first;
    const double pm = m_it->second.estimate(path).value;
    if (!row.prob_matrix || std::abs(pm - *row.prob_matrix) > 1e-9)
      mismatch(row, fmt::format("prob_matrix {} != {}", pm, optional_number(row.prob_matrix)));

    const double ps = check_sampling(instance, path, row.deadline, check_samples, row.seed);
    if (!row.prob_sampling || ps != *row.prob_sampling)
      mismatch(row, fmt::format("prob_sampling {} != {}", ps, optional_number(row.prob_sampling)));
  }
  return report;
}

std::vector<SummaryLine> summarize(const std::vector<BenchmarkRow>& rows) {
  struct Cell {
    const BenchmarkRow* ch = nullptr;
    const BenchmarkRow* ls = nullptr;
  };
  // (group, instance, H, epsilon) -> CH and LS rows.
  std::map<std::tuple<std::string, std::string, double, double>, Cell> cells;
  for (const auto& row : rows) {
    if (row.method == Method::BranchAndBound) continue;
    const std::string group = variant_of(row) + "/" + to_string(row.estimator);
    auto& cell = cells[{group, row.instance_id, row.deadline, row.epsilon}];
    (row.method == Method::ConstructionHeuristic ? cell.ch : cell.ls) = &row;
  }

  struct Acc {
    double ch = 0, ls = 0, imp = 0, pm = 0, ps = 0;
    std::size_t n_ch = 0, n_ls = 0, n_imp = 0, n_p = 0, cells = 0;
  };
  std::map<std::tuple<std::string, int, std::string>, Acc> acc;
  static const char* const kDims[] = {"theta", "H", "epsilon", "all"};
  for (const auto& [key, cell] : cells) {
    const auto& group = std::get<0>(key);
    const BenchmarkRow& any = cell.ls ? *cell.ls : *cell.ch;
    const std::string values[] = {any.theta, fmt::format("{}", any.deadline),
                                  fmt::format("{}", any.epsilon), "-"};
    for (int d = 0; d < 4; ++d) {
      auto& a = acc[{group, d, values[d]}];
      ++a.cells;
      if (cell.ch) {
        a.ch += cell.ch->reward;
        ++a.n_ch;
      }
      if (cell.ls) {
        a.ls += cell.ls->reward;
        ++a.n_ls;
        if (cell.ls->solved()) {
          a.pm += cell.ls->prob_matrix.value_or(0.0);
          a.ps += cell.ls->prob_sampling.value_or(0.0);
          ++a.n_p;
        }
      }
      if (cell.ch && cell.ls && cell.ch->solved() && cell.ls->solved() && cell.ch->reward > 0) {
        a.imp += 100.0 * (cell.ls->reward - cell.ch->reward) / cell.ch->reward;
        ++a.n_imp;
      }
    }
  }

  auto mean = [](double sum, std::size_t n) { return n ? sum / static_cast<double>(n) : 0.0; };
  std::vector<SummaryLine> lines;
  for (const auto& [key, a] : acc) {
    SummaryLine line;
    line.group = std::get<0>(key);
    line.dimension = kDims[std::get<1>(key)];
    line.value = std::get<2>(key);
    line.cells = a.cells;
    line.ch_reward = mean(a.ch, a.n_ch);
    line.ls_reward = mean(a.ls, a.n_ls);
    line.improvement_pct = mean(a.imp, a.n_imp);
    line.ls_prob_matrix = mean(a.pm, a.n_p);
    line.ls_prob_sampling = mean(a.ps, a.n_p);
    lines.push_back(std::move(line));
  }
  // Numeric order inside each dimension; the map ordered values as strings.
  std::ranges::stable_sort(lines, [](const SummaryLine& a, const SummaryLine& b) {
    auto num = [](const std::string& v) {
      try {
        return std::stod(v);
      } catch (const std::exception&) {
        return 0.0;
      }
    };
    return std::make_tuple(a.group, std::string_view(a.dimension) == "all", a.dimension,
                           num(a.value)) < std::make_tuple(b.group,
                                                           std::string_view(b.dimension) == "all",
                                                           b.dimension, num(b.value));
  });
  return lines;
}

void write_summary(std::ostream& out, const std::vector<SummaryLine>& lines) {
  out << fmt::format("{:<18}{:<9}{:>8}{:>7}{:>11}{:>11}{:>11}{:>10}{:>10}\n", "group", "dim",
                     "value", "cells", "CH_reward", "LS_reward", "LS_vs_CH%", "LS_P_M", "LS_P_S");
  for (const auto& l : lines)
    out << fmt::format("{:<18}{:<9}{:>8}{:>7}{:>11.2f}{:>11.2f}{:>11.2f}{:>10.4f}{:>10.4f}\n",
                       l.group, l.dimension, l.value, l.cells, l.ch_reward, l.ls_reward,
                       l.improvement_pct, l.ls_prob_matrix, l.ls_prob_sampling);
}

}  // namespace dsop::app
