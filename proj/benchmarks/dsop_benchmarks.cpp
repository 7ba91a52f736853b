#include <benchmark/benchmark.h>

#include "dsop/estimator.hpp"
#include "dsop/instances.hpp"
#include "dsop/solver.hpp"

namespace {

dsop::Instance bench_instance() {
  dsop::GeneratorConfig g;
  g.vertex_count = 32;
  g.side = 25.0;
  return dsop::generate_synthetic(g);
}

dsop::Path long_path(const dsop::Instance& inst, std::size_t interior) {
  dsop::Path p{inst.start()};
  for (std::uint32_t v = 1; v <= interior; ++v) p.emplace_back(v);
  p.push_back(inst.exit());
  return p;
}

void BM_MatrixModelBuild(benchmark::State& state) {
  const auto inst = bench_instance();
  dsop::SearchConfig config;
  config.range_count = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    auto est = dsop::Estimator::matrix(inst, {100, 0.2, 0}, config);
    benchmark::DoNotOptimize(est);
  }
}
BENCHMARK(BM_MatrixModelBuild)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_MatrixEstimate(benchmark::State& state) {
  const auto inst = bench_instance();
  dsop::SearchConfig config;
  const auto est = dsop::Estimator::matrix(inst, {100, 0.2, 0}, config);
  const auto path = long_path(inst, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(est.estimate(path).value);
}
BENCHMARK(BM_MatrixEstimate)->Arg(5)->Arg(15)->Arg(30);

void BM_SamplingEstimate(benchmark::State& state) {
  const auto inst = bench_instance();
  dsop::SearchConfig config;
  config.sample_count = static_cast<std::size_t>(state.range(0));
  config.estimator = dsop::EstimatorKind::Sampling;
  const auto est = dsop::Estimator::sampling(inst, {100, 0.2, 0}, config);
  const auto path = long_path(inst, 15);
  for (auto _ : state) benchmark::DoNotOptimize(est.estimate(path).value);
}
BENCHMARK(BM_SamplingEstimate)->Arg(200)->Arg(1000)->Arg(10000);

void BM_LocalSearch(benchmark::State& state) {
  const auto inst = bench_instance();
  dsop::SearchConfig config;
  config.estimator = state.range(0) == 0 ? dsop::EstimatorKind::Matrix : dsop::EstimatorKind::Sampling;
  config.sample_count = 200;
  config.max_iterations = 300;
  const auto est = dsop::Estimator::from_config(inst, {60, 0.2, 0}, config);
  for (auto _ : state) benchmark::DoNotOptimize(dsop::run_local_search(est, 0.2, config).best.reward);
}
BENCHMARK(BM_LocalSearch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
