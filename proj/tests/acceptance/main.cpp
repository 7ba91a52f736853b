// Acceptance suite: one PASS/FAIL line per criterion, followed by the numbers
// behind it. Exit status is 0 only when every criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "dsop/errors.hpp"
#include "dsop/estimator.hpp"
#include "dsop/exact.hpp"
#include "dsop/instances.hpp"
#include "dsop/seeds.hpp"
#include "dsop/solver.hpp"
#include "dsop_app/benchmark.hpp"
#include "dsop_app/cli.hpp"
#include "dsop_app/verify.hpp"
#include "oracles.hpp"

using namespace dsop;
using namespace dsop::app;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  int id;
  std::string name;
  bool pass;
  std::vector<std::string> details;
};

std::vector<Outcome> outcomes;

void report(int id, std::string name, bool pass, std::vector<std::string> details) {
  std::cout << fmt::format("criterion {}: {} {}\n", id, pass ? "PASS" : "FAIL", name);
  for (const auto& d : details) std::cout << "    " << d << '\n';
  std::cout.flush();
  outcomes.push_back({id, std::move(name), pass, std::move(details)});
}

// Average ranks, ties sharing the mean of their positions.
std::vector<double> ranks(const std::vector<double>& x) {
  std::vector<std::size_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return x[a] < x[b]; });
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && x[idx[j + 1]] == x[idx[i]]) ++j;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = 0.5 * static_cast<double>(i + j) + 1.0;
    i = j + 1;
  }
  return r;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  const auto rx = ranks(x), ry = ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0 || syy == 0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

std::string variant_of(const BenchmarkRow& row) {
  return row.instance_id.substr(0, row.instance_id.find('-'));
}

// Criteria 1 and 2 share one corpus and one pass over it.
void estimator_criteria() {
  VerifyOptions opt;
  opt.trials = 200;
  opt.paths_per_trial = 5;
  opt.samples = 10'000;
  opt.max_vertices = 6;
  const auto t0 = Clock::now();
  const auto r = run_verify(opt);
  const double secs = seconds_since(t0);
  const std::string corpus = fmt::format("{} instances ({} with a dynamic edge), {} paths, {:.1f} s",
                                         opt.trials, r.dynamic_instances, r.cases, secs);
  report(1, "matrix estimate never exceeds the exact probability",
         r.conservativeness_violations == 0 && r.dynamic_instances == opt.trials && secs < 60.0,
         {corpus, fmt::format("violations (matrix > exact + 1e-9): {}", r.conservativeness_violations),
          fmt::format("max(matrix - exact): {:.3e}", r.worst_matrix_excess)});
  report(2, "sampling estimate within 0.02 of exact in >= 95% of cases",
         r.sampling_share() >= 0.95 && secs < 120.0,
         {corpus,
          fmt::format("within 0.02: {}/{} ({:.2f}%)", r.sampling_within_tolerance, r.cases,
                      100.0 * r.sampling_share()),
          fmt::format("max |sampling - exact|: {:.4f}", r.max_sampling_error)});
}

// Integer support in [2, 4] and integer band starts: any extension of a path
// arrives no earlier than the path itself, and a half-integer deadline on a
// half-unit grid makes the matrix estimate exact.
void branch_and_bound_criterion() {
  const auto t0 = Clock::now();
  std::size_t equal_enum = 0, equal_exact = 0, ls_ok = 0, total = 0;
  std::vector<std::string> failures;
  for (std::uint64_t i = 0; i < 50; ++i) {
    std::mt19937_64 rng(derive_seed(i, "bnb"));
    OracleConfig oc;
    oc.vertex_count = 4 + rng() % 4;
    oc.outcomes_per_edge = 1 + rng() % 3;
    oc.min_time = 2;
    oc.max_time = 4;
    oc.time_step = 1;
    oc.seed = derive_seed(i, "instance");
    const auto instance = generate_oracle_instance(oc);
    const double deadline = 4.5 + static_cast<double>(rng() % 11);
    const double epsilon = 0.1 * static_cast<double>(1 + rng() % 5);
    const SolveRequest request{deadline, epsilon, 0.0};
    SearchConfig config;
    config.range_count = static_cast<std::size_t>(2 * deadline);
    config.seed = i;
    const auto estimator = Estimator::matrix(instance, request, config);

    ++total;
    double bnb = -1.0;
    try {
      bnb = branch_and_bound(estimator, epsilon, config).reward;
    } catch (const NoFeasibleSolution&) {
    }
    const auto by_matrix = testing::enumerate_optimum(
        instance, epsilon, [&](const Path& p) { return estimator.estimate(p).value; });
    const auto by_exact = testing::enumerate_optimum(instance, epsilon, [&](const Path& p) {
      return exact_completion_probability(instance, p, request).value;
    });
    double ls = -1.0;
    try {
      ls = run_local_search(estimator, epsilon, config).best.reward;
    } catch (const NoFeasibleSolution&) {
    }
    const bool e1 = bnb == by_matrix.reward;
    const bool e2 = bnb == by_exact.reward;
    const bool e3 = bnb >= ls;
    equal_enum += e1;
    equal_exact += e2;
    ls_ok += e3;
    if (!(e1 && e2 && e3))
      failures.push_back(fmt::format("instance {}: B&B {} enumeration {} (exact {}) LS {}", i, bnb,
                                     by_matrix.reward, by_exact.reward, ls));
  }

  // Informational: the same comparison without the monotone construction.
  std::size_t loose_mismatch = 0;
  for (std::uint64_t i = 0; i < 50; ++i) {
    OracleConfig oc;
    oc.vertex_count = 4 + i % 4;
    oc.outcomes_per_edge = 1 + i % 3;
    oc.seed = derive_seed(i, "loose");
    const auto instance = generate_oracle_instance(oc);
    const SolveRequest request{8.0, 0.3, 0.0};
    SearchConfig config;
    const auto estimator = Estimator::matrix(instance, request, config);
    double bnb = -1.0;
    try {
      bnb = branch_and_bound(estimator, 0.3, config).reward;
    } catch (const NoFeasibleSolution&) {
    }
    const auto best = testing::enumerate_optimum(
        instance, 0.3, [&](const Path& p) { return estimator.estimate(p).value; });
    loose_mismatch += bnb != best.reward;
  }

  const double secs = seconds_since(t0);
  std::vector<std::string> details{
      fmt::format("{} monotone oracle instances with <= 7 vertices, {:.1f} s", total, secs),
      fmt::format("B&B == enumeration (matrix): {}/{}", equal_enum, total),
      fmt::format("B&B == enumeration (exact):  {}/{}", equal_exact, total),
      fmt::format("B&B >= LS:                   {}/{}", ls_ok, total),
      fmt::format("info: unrestricted corpus, B&B != enumeration in {}/50", loose_mismatch)};
  details.insert(details.end(), failures.begin(), failures.end());
  report(3, "branch and bound is optimal and dominates local search",
         equal_enum == total && equal_exact == total && ls_ok == total && secs < 600.0, details);
}

void sweep_criteria(std::size_t repetitions, const fs::path& out_dir) {
  BenchmarkOptions opt;
  opt.repetitions = repetitions;
  std::cout << fmt::format("running the benchmark sweep ({} repetitions)...\n", repetitions);
  std::cout.flush();
  const auto result = run_benchmark(opt);
  write_benchmark_dir(out_dir, opt, result);

  // Criterion 4: recomputed feasibility with the row's own estimator, and
  // sampling re-scores of matrix solutions.
  std::size_t solved = 0, own_ok = 0, matrix_rows = 0, matrix_sampled_ok = 0, unsolved = 0;
  double worst_margin = 1.0;
  std::map<std::pair<std::string, double>, Estimator> matrices;
  std::vector<std::string> failures;
  for (const auto& row : result.rows) {
    if (!row.solved()) {
      ++unsolved;
      continue;
    }
    ++solved;
    const Instance& instance = result.instances.at(row.instance_id);
    const SolveRequest request{row.deadline, row.epsilon, 0.0};
    double own = 0.0;
    if (row.estimator == EstimatorKind::Matrix) {
      auto it = matrices.find({row.instance_id, row.deadline});
      if (it == matrices.end())
        it = matrices.emplace(std::pair{row.instance_id, row.deadline},
                              Estimator::matrix(instance, request, opt.search))
                 .first;
      own = it->second.estimate(row.path).value;
    } else {
      SearchConfig config = opt.search;
      config.seed = row.seed;
      own = Estimator::sampling(instance, request, config).estimate(row.path).value;
    }
    if (is_feasible(own, row.epsilon))
      ++own_ok;
    else
      failures.push_back(fmt::format("{}: own estimate {}", row.key(), own));
    if (row.estimator == EstimatorKind::Matrix) {
      ++matrix_rows;
      const double ps = row.prob_sampling.value_or(0.0);
      worst_margin = std::min(worst_margin, ps - (1.0 - row.epsilon));
      if (is_feasible(ps, row.epsilon))
        ++matrix_sampled_ok;
      else
        failures.push_back(fmt::format("{}: sampling re-score {}", row.key(), ps));
    }
  }
  std::vector<std::string> d4{
      fmt::format("{} rows, {} solved, {} without a feasible path", result.rows.size(), solved,
                  unsolved),
      fmt::format("own-estimator feasibility: {}/{}", own_ok, solved),
      fmt::format("matrix solutions with sampling (N={}) >= 1 - eps: {}/{}", opt.check_samples,
                  matrix_sampled_ok, matrix_rows),
      fmt::format("smallest sampling margin over 1 - eps: {:.4f}", worst_margin)};
  for (std::size_t i = 0; i < std::min<std::size_t>(failures.size(), 10); ++i)
    d4.push_back(failures[i]);
  report(4, "every returned solution is feasible",
         solved > 0 && own_ok == solved && matrix_sampled_ok == matrix_rows, d4);

  // Criterion 5: mean LS reward curves of the sampling estimator.
  std::vector<std::string> d5;
  bool trend_ok = true;
  for (const std::string variant : {"simple", "hard"}) {
    std::map<double, std::pair<double, std::size_t>> by_h, by_eps;
    for (const auto& row : result.rows) {
      if (row.method != Method::LocalSearch || row.estimator != EstimatorKind::Sampling ||
          variant_of(row) != variant)
        continue;
      const double r = row.solved() ? row.reward : 0.0;
      by_h[row.deadline].first += r;
      ++by_h[row.deadline].second;
      by_eps[row.epsilon].first += r;
      ++by_eps[row.epsilon].second;
    }
    for (const auto& [label, curve] : {std::pair{"H", &by_h}, std::pair{"epsilon", &by_eps}}) {
      std::vector<double> x, y;
      std::string points;
      for (const auto& [k, v] : *curve) {
        x.push_back(k);
        y.push_back(v.first / static_cast<double>(v.second));
        points += fmt::format(" {}:{:.1f}", k, y.back());
      }
      const double rho = spearman(x, y);
      trend_ok = trend_ok && x.size() >= 2 && rho >= 0.9;
      d5.push_back(fmt::format("{} mean LS reward over {}: rho = {:.3f} |{}", variant, label, rho, points));
    }
  }
  report(5, "sampling LS reward grows with H and epsilon (Spearman >= 0.9)", trend_ok, d5);

  // Criterion 6: LS never below CH, and hard instances gain more.
  std::map<std::string, const BenchmarkRow*> ch;
  for (const auto& row : result.rows)
    if (row.method == Method::ConstructionHeuristic)
      ch[fmt::format("{}|{}|{}|{}", row.instance_id, to_string(row.estimator), row.deadline, row.epsilon)] = &row;
  std::size_t pairs = 0, ls_ge = 0;
  std::vector<std::string> d6;
  for (const auto& row : result.rows) {
    if (row.method != Method::LocalSearch) continue;
    const auto it = ch.find(fmt::format("{}|{}|{}|{}", row.instance_id, to_string(row.estimator),
                                        row.deadline, row.epsilon));
    if (it == ch.end()) continue;
    ++pairs;
    const double ls_r = row.solved() ? row.reward : 0.0;
    const double ch_r = it->second->solved() ? it->second->reward : 0.0;
    if (ls_r >= ch_r)
      ++ls_ge;
    else
      d6.push_back(fmt::format("{}: LS {} < CH {}", row.key(), ls_r, ch_r));
  }
  double simple_imp = 0, hard_imp = 0;
  for (const auto& line : summarize(result.rows)) {
    if (line.dimension != "all") continue;
    if (line.group == "simple/sampling") simple_imp = line.improvement_pct;
    if (line.group == "hard/sampling") hard_imp = line.improvement_pct;
    d6.push_back(fmt::format("{}: mean LS improvement over CH {:.2f}%", line.group, line.improvement_pct));
  }
  d6.insert(d6.begin(), fmt::format("LS >= CH: {}/{}", ls_ge, pairs));
  report(6, "LS never below CH; hard instances gain more than simple ones (sampling)",
         pairs > 0 && ls_ge == pairs && hard_imp > simple_imp, d6);

  // Criterion 8, sweep part.
  const bool sweep_ok = result.wall_seconds <= 1800.0 && result.max_local_search_seconds <= 60.0;
  std::vector<std::string> d8{
      fmt::format("sweep wall time: {:.1f} s (budget 1800 s)", result.wall_seconds),
      fmt::format("slowest LS run in the sweep: {:.2f} s (budget 60 s)", result.max_local_search_seconds)};

  // One LS run at the default search settings, both estimators, at the
  // widest setting of the sweep.
  bool single_ok = true;
  for (const bool hard : {false, true}) {
    GeneratorConfig g;
    g.vertex_count = 32;
    g.side = opt.side;
    g.hard = hard;
    const auto instance = hard ? generate_hard_variant(g) : generate_synthetic(g);
    for (auto kind : {EstimatorKind::Matrix, EstimatorKind::Sampling}) {
      SearchConfig config;
      config.estimator = kind;
      const auto t0 = Clock::now();
      const auto s = local_search(instance, {100, 0.5, 0}, config);
      const double secs = seconds_since(t0);
      single_ok = single_ok && secs <= 60.0;
      d8.push_back(fmt::format("default LS run, {} variant, {} (ranges {}, samples {}): {:.2f} s, reward {}",
                               hard ? "hard" : "simple", to_string(kind), config.range_count,
                               config.sample_count, secs, s.reward));
    }
  }
  report(8, "desk-scale budget", sweep_ok && single_ok, d8);
}

std::string slurp(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

void determinism_criterion(const fs::path& work) {
  fs::remove_all(work);
  fs::create_directories(work);
  auto run = [](std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return std::pair{code, out.str()};
  };
  const auto inst = (work / "instance.json").string();
  std::vector<std::string> details;
  bool ok = true;
  auto compare = [&](const std::string& what, const std::string& a, const std::string& b) {
    const bool same = a == b && !a.empty();
    ok = ok && same;
    details.push_back(fmt::format("{}: {} ({} bytes)", what, same ? "identical" : "DIFFERENT", a.size()));
  };

  const auto g1 = run({"generate", "--vertices", "32", "--hard", "--seed", "7"});
  const auto g2 = run({"generate", "--vertices", "32", "--hard", "--seed", "7"});
  compare("generate", g1.second, g2.second);
  std::ofstream(inst, std::ios::binary) << g1.second;

  for (const std::string est : {"matrix", "sampling"}) {
    const std::vector<std::string> args{"solve", inst, "-H", "60", "-e", "0.2", "--estimator", est, "--seed", "3"};
    const auto s1 = run(args);
    const auto s2 = run(args);
    ok = ok && s1.first == 0;
    compare("solve report (" + est + ")", s1.second, s2.second);
  }

  const std::vector<std::string> base{"benchmark", "--deadlines", "40,80", "--epsilons", "0.2,0.4",
                                      "--repetitions", "1", "--vertices", "16", "--seed", "5"};
  auto a = base, b = base;
  a.insert(a.end(), {"--out", (work / "a").string()});
  b.insert(b.end(), {"--out", (work / "b").string()});
  const auto b1 = run(a);
  const auto b2 = run(b);
  ok = ok && b1.first == 0 && b2.first == 0;
  compare("benchmark summary", b1.second, b2.second);
  for (const std::string f : {"results.csv", "paths.json", "summary.txt"})
    compare("benchmark " + f, slurp(work / "a" / f), slurp(work / "b" / f));
  report(7, "repeated commands give byte-identical output", ok, details);
  fs::remove_all(work);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dsop acceptance suite"};
  std::size_t repetitions = 5;
  std::string out_dir = "acceptance-sweep";
  app.add_option("--repetitions", repetitions, "instances per sweep setting")->capture_default_str();
  app.add_option("--out", out_dir, "where the sweep directory is written")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  const auto t0 = Clock::now();
  estimator_criteria();
  branch_and_bound_criterion();
  determinism_criterion(fs::path(out_dir).concat("-determinism"));
  sweep_criteria(repetitions, out_dir);

  std::sort(outcomes.begin(), outcomes.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  std::size_t passed = 0;
  std::cout << "\nsummary\n";
  for (const auto& o : outcomes) {
    passed += o.pass;
    std::cout << fmt::format("criterion {}: {} {}\n", o.id, o.pass ? "PASS" : "FAIL", o.name);
  }
  std::cout << fmt::format("{}/{} criteria passed in {:.1f} s\n", passed, outcomes.size(),
                           seconds_since(t0));
  return passed == outcomes.size() ? 0 : 1;
}
