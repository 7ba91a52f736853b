#include <cmath>

#include <doctest.h>

#include "dsop/errors.hpp"
#include "dsop/estimate.hpp"
#include "dsop/exact.hpp"
#include "dsop/instances.hpp"
#include "dsop/sampling.hpp"
#include "oracles.hpp"

using namespace dsop;
using namespace dsop::testing;

namespace {

Instance coin_flip() {
  return make_instance({0, 0, 0}, {edge(0, 1, discrete({{2, 0.5}, {5, 0.5}})), edge(1, 2, point(1))},
                       0, 2);
}

Instance sevens() {
  return make_instance({0, 0, 0}, {edge(0, 1, point(3)), edge(1, 2, point(4))}, 0, 2);
}

}  // namespace

TEST_SUITE("sampling") {
  TEST_CASE("arrivals exactly at H are on time") {
    for (std::size_t n : {1, 7, 1000}) {
      const auto est = sampling_completion_probability(sevens(), path_of({0, 1, 2}), {7, 0, 0}, n, 1);
      CHECK(est.value == 1.0);
      CHECK(est.successes == n);
    }
    CHECK(sampling_completion_probability(sevens(), path_of({0, 1, 2}), {6.9, 0, 0}, 100, 1).value == 0.0);
  }

  TEST_CASE("coin flip estimate") {
    const auto est = sampling_completion_probability(coin_flip(), path_of({0, 1, 2}), {4, 0, 0}, 10000, 42);
    CHECK(est.value >= 0.48);
    CHECK(est.value <= 0.52);
    CHECK(est.method == EstimatorKind::Sampling);
    CHECK(est.samples == 10000);
    CHECK(est.value == static_cast<double>(est.successes) / 10000.0);
    // Regression constant for this seed.
    CHECK(est.successes == 5049);
  }

  TEST_CASE("fixed seeds repeat, other seeds differ") {
    const auto inst = coin_flip();
    const auto a = sampling_completion_probability(inst, path_of({0, 1, 2}), {4, 0, 0}, 5000, 9);
    const auto b = sampling_completion_probability(inst, path_of({0, 1, 2}), {4, 0, 0}, 5000, 9);
    const auto c = sampling_completion_probability(inst, path_of({0, 1, 2}), {4, 0, 0}, 5000, 10);
    CHECK(a.successes == b.successes);
    CHECK(a.successes != c.successes);
  }

  TEST_CASE("the band is picked from each walk's own arrival time") {
    const auto inst = make_instance(
        {0, 0, 0},
        {edge(0, 1, discrete({{2, 0.5}, {4, 0.5}})),
         banded(1, 2, {Band{0, point(1)}, Band{3, point(10)}})},
        0, 2);
    const auto est = sampling_completion_probability(inst, path_of({0, 1, 2}), {6, 0, 0}, 20000, 5);
    CHECK(est.value == doctest::Approx(0.5).epsilon(0.03));
  }

  TEST_CASE("missing edges make every walk late") {
    const auto inst = make_instance({0, 0, 0}, {edge(0, 2, point(1))}, 0, 2);
    CHECK(sampling_completion_probability(inst, path_of({0, 1, 2}), {10, 0, 0}, 50, 1).value == 0.0);
  }

  TEST_CASE("a shared bank gives the same walks as a path bank") {
    GeneratorConfig g;
    g.vertex_count = 6;
    g.seed = 4;
    const auto inst = generate_synthetic(g);
    const auto path = path_of({0, 3, 1, 5});
    const SampleBank full(inst, 700, 77);
    const auto a = sampling_completion_probability(full, path, {25, 0, 0});
    const auto b = sampling_completion_probability(inst, path, {25, 0, 0}, 700, 77);
    CHECK(a.successes == b.successes);
  }

  TEST_CASE("monotone in H with common random numbers") {
    GeneratorConfig g;
    g.vertex_count = 8;
    g.seed = 8;
    const auto inst = generate_synthetic(g);
    const auto path = path_of({0, 2, 4, 6, 1, 7});
    const SampleBank bank(inst, 2000, 3);
    double previous = 0.0;
    for (double h = 5; h <= 80; h += 2.5) {
      const double v = sampling_completion_probability(bank, path, {h, 0, 0}).value;
      CHECK(v >= previous);
      previous = v;
    }
  }

  TEST_CASE("zero samples is a configuration error") {
    CHECK_THROWS_AS(SampleBank(coin_flip(), 0, 1), ConfigError);
  }
}

TEST_SUITE("exact") {
  TEST_CASE("single point mass") {
    const auto inst = make_instance({0, 0}, {edge(0, 1, point(3))}, 0, 1);
    const auto est = exact_completion_probability(inst, path_of({0, 1}), {5, 0, 0});
    CHECK(est.value == 1.0);
    CHECK(est.method == EstimatorKind::ExactOracle);
  }

  TEST_CASE("dynamic second edge") {
    const auto inst = make_instance(
        {0, 0, 0},
        {edge(0, 1, discrete({{2, 0.5}, {4, 0.5}})),
         banded(1, 2, {Band{0, point(1)}, Band{3, point(10)}})},
        0, 2);
    CHECK(exact_completion_probability(inst, path_of({0, 1, 2}), {6, 0, 0}).value == 0.5);
  }

  TEST_CASE("two fair coins") {
    const auto inst = make_instance(
        {0, 0, 0}, {edge(0, 1, discrete({{1, 0.5}, {2, 0.5}})), edge(1, 2, discrete({{1, 0.5}, {2, 0.5}}))},
        0, 2);
    CHECK(exact_completion_probability(inst, path_of({0, 1, 2}), {3, 0, 0}).value == 0.75);
  }

  TEST_CASE("agrees with an odometer enumeration on oracle instances") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      OracleConfig oc;
      oc.vertex_count = 3 + seed % 4;
      oc.outcomes_per_edge = 1 + seed % 3;
      oc.seed = seed;
      const auto inst = generate_oracle_instance(oc);
      Path path{inst.start()};
      for (std::uint32_t v = 1; v + 1 < inst.vertex_count(); ++v) path.emplace_back(v);
      path.push_back(inst.exit());
      for (double h : {2.0, 5.0, 8.5, 13.0}) {
        const double exact = exact_completion_probability(inst, path, {h, 0, 0}).value;
        CHECK(exact == doctest::Approx(brute_force_completion(inst, path, h)).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("gamma edges are unsupported") {
    const auto inst = make_instance({0, 0}, {edge(0, 1, GammaDist{2, 1})}, 0, 1);
    CHECK_THROWS_AS(exact_completion_probability(inst, path_of({0, 1}), {5, 0, 0}), UnsupportedError);
  }

  TEST_CASE("outcome cap") {
    const auto coin = discrete({{1, 0.5}, {2, 0.5}});
    const auto inst = make_instance({0, 0, 0, 0}, {edge(0, 1, coin), edge(1, 2, coin), edge(2, 3, coin)}, 0, 3);
    CHECK_NOTHROW(exact_completion_probability(inst, path_of({0, 1, 2, 3}), {5, 0, 0}, 8));
    CHECK_THROWS_AS(exact_completion_probability(inst, path_of({0, 1, 2, 3}), {5, 0, 0}, 7), ConfigError);
  }
}

TEST_SUITE("feasibility") {
  TEST_CASE("risk criterion") {
    CHECK(is_feasible(0.79, 0.3));
    CHECK(is_feasible(0.54, 0.5));
    CHECK_FALSE(is_feasible(0.89, 0.1));
    CHECK(is_feasible(0.9, 0.1));
    CHECK(is_feasible(1.0, 0.0));
    CHECK_FALSE(is_feasible(0.999, 0.0));
    ProbabilityEstimate e;
    e.value = 0.7;
    CHECK(is_feasible(e, 0.3));
  }
}

TEST_SUITE("expected_utility") {
  TEST_CASE("certain arrivals collect the full reward") {
    auto inst = make_instance({0, 100}, {edge(0, 1, point(1))}, 0, 1);
    CHECK(expected_utility(inst, path_of({0, 1}), {5, 0, 0}, 100, 1) == 100.0);
  }

  TEST_CASE("a coin-flip arrival mixes reward and penalty") {
    Instance inst({{0, 0}, {100, 50}}, {edge(0, 1, discrete({{1, 0.5}, {9, 0.5}}))}, VertexId(0),
                  VertexId(1));
    const double u = expected_utility(inst, path_of({0, 1}), {5, 0, 0}, 20000, 2);
    CHECK(u == doctest::Approx(25.0).epsilon(0.08));
  }

  TEST_CASE("matches exact per-vertex arrival probabilities") {
    Instance inst({{10, 4}, {30, 20}, {60, 5}},
                  {edge(0, 1, discrete({{1, 0.6}, {3, 0.4}})), edge(1, 2, discrete({{1, 0.5}, {2.5, 0.5}}))},
                  VertexId(0), VertexId(2));
    const double h = 3.5;
    const double p1 = brute_force_completion(inst, path_of({0, 1}), h);
    const double p2 = brute_force_completion(inst, path_of({0, 1, 2}), h);
    const double exact = 10 + (p1 * 30 - (1 - p1) * 20) + (p2 * 60 - (1 - p2) * 5);
    const double u = expected_utility(inst, path_of({0, 1, 2}), {h, 0, 0}, 40000, 6);
    CHECK(u == doctest::Approx(exact).epsilon(0.02));
  }
}
