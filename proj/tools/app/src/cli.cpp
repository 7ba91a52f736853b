#include "dsop_app/cli.hpp"

#include <chrono>
#include <fstream>
#include <ostream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "dsop/errors.hpp"
#include "dsop/estimator.hpp"
#include "dsop/instance_io.hpp"
#include "dsop/instances.hpp"
#include "dsop/solver.hpp"
#include "dsop_app/benchmark.hpp"
#include "dsop_app/verify.hpp"

namespace dsop::app {

namespace {

struct SearchFlags {
  SearchConfig config;

  void attach(CLI::App& cmd) {
    cmd.add_option("--max-iterations", config.max_iterations, "local search iterations")
        ->capture_default_str();
    cmd.add_option("--max-no-improve", config.max_iter_no_improve,
                   "iterations without improvement before the metric switches")
        ->capture_default_str();
    cmd.add_option("--temperature", config.initial_temperature, "initial annealing temperature")
        ->capture_default_str();
    cmd.add_option("--cooling", config.cooling, "temperature factor per iteration")
        ->capture_default_str();
    cmd.add_option("--ranges", config.range_count, "arrival-time ranges of the matrix grid")
        ->capture_default_str();
    cmd.add_option("--samples", config.sample_count, "walks of the sampling estimator")
        ->capture_default_str();
    cmd.add_option("--max-refinement", config.max_grid_refinement,
                   "largest grid refinement factor for band alignment")
        ->capture_default_str();
    cmd.add_option("--probes", config.interior_probes, "interior probes per range for gamma edges")
        ->capture_default_str();
    cmd.add_option("--node-budget", config.node_budget, "branch-and-bound node limit")
        ->capture_default_str();
  }
};

std::vector<Point> read_coordinates(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw Error("cannot open " + file);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(fmt::format("line {}", e.byte), e.what());
  }
  std::vector<Point> points;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& p = j[i];
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
      throw ParseError(fmt::format("[{}]", i), "expected an [x, y] pair");
    points.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  return points;
}

void print_solution(std::ostream& out, const Instance& instance, const Solution& s,
                    const SolveRequest& request, const SearchConfig& config,
                    std::size_t check_samples) {
  const double pm = Estimator::matrix(instance, request, config).estimate(s.path).value;
  const double ps = check_sampling(instance, s.path, request.deadline, check_samples, config.seed);
  out << fmt::format("path: {}\n", format_path(s.path));
  out << fmt::format("vertices: {}\n", s.path.size());
  out << fmt::format("reward: {}\n", s.reward);
  out << fmt::format("probability ({}): {}\n", to_string(s.estimator), s.completion_probability);
  out << fmt::format("prob_matrix: {}\n", pm);
  out << fmt::format("prob_sampling: {} (N={})\n", ps, check_samples);
  out << fmt::format("feasible: {}\n",
                     is_feasible(s.completion_probability, request.epsilon) ? "yes" : "no");
}

template <class T, class F>
std::vector<T> convert_all(const std::vector<std::string>& names, F&& f) {
  std::vector<T> out;
  for (const auto& n : names) out.push_back(f(n));
  return out;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Risk-sensitive dynamic stochastic orienteering solver", "dsop"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "show help for all subcommands");

  // generate
  auto* generate = app.add_subcommand("generate", "write a synthetic instance");
  GeneratorConfig gen;
  std::string gen_output;
  std::string gen_coordinates;
  generate->add_option("--vertices", gen.vertex_count, "vertex count")->capture_default_str();
  generate->add_option("--theta", gen.theta, "gamma scale in [1, 4]")->capture_default_str();
  generate->add_option("--side", gen.side, "side of the square holding the points")
      ->capture_default_str();
  generate->add_option("--bands", gen.band_count, "time bands per edge")->capture_default_str();
  generate->add_option("--band-span", gen.band_span, "length of each time band")
      ->capture_default_str();
  generate->add_option("--band-drift", gen.band_drift, "relative shape drift between bands")
      ->capture_default_str();
  generate->add_option("--penalty-fraction", gen.penalty_fraction, "penalty as a share of reward")
      ->capture_default_str();
  generate->add_flag("--hard", gen.hard, "per-edge scales and broken triangle inequality");
  generate->add_option("--coordinates", gen_coordinates, "JSON file with [[x, y], ...] points");
  generate->add_option("--seed", gen.seed, "generator seed")->capture_default_str();
  generate->add_option("-o,--output", gen_output, "instance file (stdout when omitted)");

  // validate
  auto* validate = app.add_subcommand("validate", "check an instance file");
  std::string validate_file;
  validate->add_option("instance", validate_file, "instance file")->required();

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "solve one request");
  std::string solve_file;
  SolveRequest request;
  std::string method_name = "ls";
  std::string estimator_name = "matrix";
  std::size_t check_samples = 10'000;
  SearchFlags solve_flags;
  solve_cmd->add_option("instance", solve_file, "instance file")->required();
  solve_cmd->add_option("-H,--deadline", request.deadline, "deadline H")->required();
  solve_cmd->add_option("-e,--epsilon", request.epsilon, "allowed failure probability")
      ->required();
  solve_cmd->add_option("--start-time", request.start_time, "arrival time at the start vertex")
      ->capture_default_str();
  solve_cmd->add_option("--method", method_name, "ch, ls or bnb")->capture_default_str();
  solve_cmd->add_option("--estimator", estimator_name, "matrix or sampling")->capture_default_str();
  solve_cmd->add_option("--seed", solve_flags.config.seed, "search and sampler seed")
      ->capture_default_str();
  solve_cmd->add_option("--check-samples", check_samples, "walks for the prob_sampling line")
      ->capture_default_str();
  solve_flags.attach(*solve_cmd);

  // benchmark
  auto* bench = app.add_subcommand("benchmark", "run a sweep over H, epsilon and theta");
  BenchmarkOptions bopt;
  std::vector<std::string> bench_methods{"ch", "ls"};
  std::vector<std::string> bench_estimators{"matrix", "sampling"};
  std::vector<std::string> bench_variants{"simple", "hard"};
  std::string bench_out = "benchmark-out";
  std::string bench_from_csv;
  bool bench_progress = false;
  SearchFlags bench_flags;
  bench_flags.config = BenchmarkOptions::default_search();
  bench->add_option("--deadlines", bopt.deadlines, "deadlines H")->delimiter(',')->capture_default_str();
  bench->add_option("--epsilons", bopt.epsilons, "risk levels")->delimiter(',')->capture_default_str();
  bench->add_option("--thetas", bopt.thetas, "gamma scales of the simple variant")
      ->delimiter(',')
      ->capture_default_str();
  bench->add_option("--methods", bench_methods, "ch, ls, bnb")->delimiter(',')->capture_default_str();
  bench->add_option("--estimators", bench_estimators, "matrix, sampling")
      ->delimiter(',')
      ->capture_default_str();
  bench->add_option("--variants", bench_variants, "simple, hard")->delimiter(',')->capture_default_str();
  bench->add_option("--repetitions", bopt.repetitions, "instances per setting (seeds seed..seed+r-1)")
      ->capture_default_str();
  bench->add_option("--seed", bopt.seed, "base seed")->capture_default_str();
  bench->add_option("--vertices", bopt.vertices, "vertex count")->capture_default_str();
  bench->add_option("--side", bopt.side, "side of the square holding the points")
      ->capture_default_str();
  bench->add_option("--check-samples", bopt.check_samples, "walks for prob_sampling")
      ->capture_default_str();
  bench->add_option("--out", bench_out, "output directory")->capture_default_str();
  bench->add_flag("--record-runtime", bopt.record_runtime,
                  "write measured runtimes into the CSV (breaks byte-identical reruns)");
  bench->add_flag("--progress", bench_progress, "report each finished cell on stderr");
  bench->add_option("--from-csv", bench_from_csv, "only summarize an existing results CSV");
  bench_flags.attach(*bench);

  // verify
  auto* verify = app.add_subcommand("verify", "cross-check the estimators on oracle instances");
  VerifyOptions vopt;
  verify->add_option("--trials", vopt.trials, "oracle instances")->capture_default_str();
  verify->add_option("--paths", vopt.paths_per_trial, "random paths per instance")
      ->capture_default_str();
  verify->add_option("--samples", vopt.samples, "walks per sampling estimate")->capture_default_str();
  verify->add_option("--ranges", vopt.range_count, "matrix ranges")->capture_default_str();
  verify->add_option("--min-vertices", vopt.min_vertices, "smallest instance")->capture_default_str();
  verify->add_option("--max-vertices", vopt.max_vertices, "largest instance")->capture_default_str();
  verify->add_option("--tolerance", vopt.sampling_tolerance, "allowed |sampling - exact|")
      ->capture_default_str();
  verify->add_option("--seed", vopt.seed, "seed")->capture_default_str();

  // rescore
  auto* rescore = app.add_subcommand("rescore", "recompute a benchmark directory from its paths");
  std::string rescore_dir;
  rescore->add_option("dir", rescore_dir, "directory written by benchmark")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*generate) {
      if (!gen_coordinates.empty()) gen.coordinates = read_coordinates(gen_coordinates);
      const Instance instance = gen.hard ? generate_hard_variant(gen) : generate_synthetic(gen);
      if (gen_output.empty()) {
        out << save_instance(instance);
        err << fmt::format("seed: {}\n", gen.seed);
      } else {
        write_instance_file(gen_output, instance);
        out << fmt::format("seed: {}\n", gen.seed);
      }
      return kOk;
    }

    if (*validate) {
      try {
        const Instance instance = read_instance_file(validate_file);
        out << fmt::format("ok: {} vertices, {} edges\n", instance.vertex_count(),
                           instance.edges().size());
        return kOk;
      } catch (const ValidationError& e) {
        for (const auto& v : e.violations()) out << fmt::format("{}: {}\n", v.field, v.rule);
        return kInvalidInput;
      }
    }

    if (*solve_cmd) {
      const Instance instance = read_instance_file(solve_file);
      SearchConfig config = solve_flags.config;
      config.estimator = estimator_from_string(estimator_name);
      const Method method = method_from_string(method_name);
      if (const auto v = validate_request(request); !v.empty())
        throw ConfigError(v.front().field + ": " + v.front().rule);
      if (const auto v = validate_config(config); !v.empty())
        throw ConfigError(v.front().field + ": " + v.front().rule);

      const auto t0 = std::chrono::steady_clock::now();
      const auto estimator = Estimator::from_config(instance, request, config);
      out << fmt::format("method: {}\nestimator: {}\n", to_string(method), to_string(config.estimator));
      try {
        const Solution s = solve(method, estimator, request.epsilon, config);
        err << fmt::format("runtime: {:.3f} s\n",
                           std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
        out << "status: ok\n";
        print_solution(out, instance, s, request, config, check_samples);
        return kOk;
      } catch (const Timeout& t) {
        out << "status: timeout (best so far)\n";
        print_solution(out, instance, t.best(), request, config, check_samples);
        err << t.what() << '\n';
        return kTimeout;
      } catch (const NoFeasibleSolution& e) {
        out << "status: infeasible\n";
        err << e.what() << '\n';
        return kInfeasible;
      }
    }

    if (*bench) {
      if (!bench_from_csv.empty()) {
        std::ifstream in(bench_from_csv);
        if (!in) throw Error("cannot open " + bench_from_csv);
        write_summary(out, summarize(read_csv(in)));
        return kOk;
      }
      bopt.search = bench_flags.config;
      bopt.methods = convert_all<Method>(bench_methods, method_from_string);
      bopt.estimators = convert_all<EstimatorKind>(bench_estimators, estimator_from_string);
      bopt.variants = convert_all<Variant>(bench_variants, variant_from_string);
      if (std::ranges::count(bopt.estimators, EstimatorKind::ExactOracle))
        throw ConfigError("the exact oracle cannot drive a solver");
      if (const auto v = validate_config(bopt.search); !v.empty())
        throw ConfigError(v.front().field + ": " + v.front().rule);
      const auto result = run_benchmark(bopt, bench_progress ? &err : nullptr);
      write_benchmark_dir(bench_out, bopt, result);
      write_summary(out, summarize(result.rows));
      err << fmt::format("rows: {}  wall: {:.1f} s  slowest LS run: {:.2f} s  B&B timeouts: {}\n",
                         result.rows.size(), result.wall_seconds, result.max_local_search_seconds,
                         result.timeouts);
      return kOk;
    }

    if (*verify) {
      const auto report = run_verify(vopt);
      write_verify_report(out, vopt, report);
      return report.passed(vopt) ? kOk : kCheckFailed;
    }

    if (*rescore) {
      const auto report = rescore_benchmark_dir(rescore_dir);
      for (const auto& m : report.messages) out << m << '\n';
      out << fmt::format("rows: {}  mismatches: {}\n", report.rows, report.mismatches);
      return report.mismatches == 0 ? kOk : kCheckFailed;
    }
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const ValidationError& e) {
    err << "invalid instance: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const NoFeasibleSolution& e) {
    err << e.what() << '\n';
    return kInfeasible;
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kCheckFailed;
  }
  return kUsage;
}

}  // namespace dsop::app
