#include <cmath>

#include <doctest.h>

#include "dsop/errors.hpp"
#include "dsop/instance_io.hpp"
#include "dsop/instances.hpp"
#include "dsop/seeds.hpp"

using namespace dsop;

TEST_SUITE("instances") {
  TEST_CASE("gamma parameters from a mean") {
    const auto a = gamma_for_mean(6, 2, 2, 9);
    CHECK(a.shape == 3.0);
    CHECK(a.scale == 2.0);
    const auto b = gamma_for_mean(1, 4, 2, 9);
    CHECK(b.shape == 2.0);
    CHECK(b.scale == 0.5);
    CHECK(b.mean() == 1.0);
    const auto c = gamma_for_mean(100, 1, 2, 9);
    CHECK(c.shape == 9.0);
    CHECK(c.mean() == doctest::Approx(100.0));
  }

  TEST_CASE("inflation scales the shape and keeps the scale") {
    const auto g = gamma_for_mean(5, 2, 2, 9);
    const auto big = inflate_gamma(g, 3, 9);
    CHECK(big.scale == g.scale);
    CHECK(big.mean() == doctest::Approx(15.0));
    CHECK(inflate_gamma(g, 10, 9).shape == 9.0);
  }

  TEST_CASE("coordinates fix the base means") {
    GeneratorConfig g;
    g.vertex_count = 2;
    g.coordinates = std::vector<Point>{{0, 0}, {3, 4}};
    g.band_count = 1;
    const auto inst = generate_synthetic(g);
    REQUIRE(inst.edges().size() == 2);
    for (const auto& e : inst.edges()) CHECK(mean(e.bands[0].dist) == doctest::Approx(5.0));
  }

  TEST_CASE("generation is a pure function of the seed") {
    GeneratorConfig g;
    g.vertex_count = 10;
    g.seed = 17;
    CHECK(save_instance(generate_synthetic(g)) == save_instance(generate_synthetic(g)));
    auto h = g;
    h.seed = 18;
    CHECK_FALSE(generate_synthetic(g) == generate_synthetic(h));
    g.hard = true;
    CHECK(save_instance(generate_hard_variant(g)) == save_instance(generate_hard_variant(g)));
  }

  TEST_CASE("simple instances are valid, complete and metric") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      GeneratorConfig g;
      g.vertex_count = 12;
      g.seed = seed;
      const auto inst = generate_synthetic(g);
      CHECK(validate_instance(inst).empty());
      CHECK(inst.edges().size() == 12 * 11);
      CHECK(inst.start() == VertexId(0));
      CHECK(inst.exit() == VertexId(11));
      CHECK_FALSE(find_violated_triangle(inst));
      for (const auto& v : inst.vertices()) {
        CHECK(v.reward >= 1);
        CHECK(v.reward <= 100);
        CHECK(v.reward == std::floor(v.reward));
      }
      for (const auto& e : inst.edges()) {
        CHECK(e.bands.size() == 3);
        for (std::size_t b = 0; b < e.bands.size(); ++b) {
          CHECK(e.bands[b].start == 24.0 * static_cast<double>(b));
          const auto& gd = std::get<GammaDist>(e.bands[b].dist);
          CHECK(gd.shape >= 2.0);
          CHECK(gd.shape <= 9.0);
          CHECK(gd.scale == std::get<GammaDist>(e.bands[0].dist).scale);
        }
      }
    }
  }

  TEST_CASE("hard instances break the triangle inequality") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      GeneratorConfig g;
      g.vertex_count = 12;
      g.seed = seed;
      g.hard = true;
      const auto inst = generate_hard_variant(g);
      CHECK(validate_instance(inst).empty());
      const auto t = find_violated_triangle(inst);
      REQUIRE(t);
      const auto m = [&](VertexId a, VertexId b) { return mean(inst.find_edge(a, b)->bands[0].dist); };
      CHECK(m((*t)[0], (*t)[2]) > m((*t)[0], (*t)[1]) + m((*t)[1], (*t)[2]));
    }
  }

  TEST_CASE("penalties follow the reward fraction") {
    GeneratorConfig g;
    g.vertex_count = 6;
    g.penalty_fraction = 0.5;
    const auto inst = generate_synthetic(g);
    for (const auto& v : inst.vertices()) CHECK(v.penalty == 0.5 * v.reward);
  }

  TEST_CASE("bad configurations") {
    GeneratorConfig g;
    g.vertex_count = 3;
    g.coordinates = std::vector<Point>{{1, 1}, {1, 1}, {2, 2}};
    CHECK_THROWS_AS(generate_synthetic(g), GenerationError);
    GeneratorConfig one;
    one.vertex_count = 1;
    CHECK_THROWS(generate_synthetic(one));
    GeneratorConfig theta;
    theta.theta = 5;
    CHECK_THROWS(generate_synthetic(theta));
  }

  TEST_CASE("oracle instances") {
    OracleConfig oc;
    oc.vertex_count = 5;
    oc.outcomes_per_edge = 3;
    oc.min_time = 2;
    oc.max_time = 4;
    oc.time_step = 1;
    oc.seed = 12;
    const auto inst = generate_oracle_instance(oc);
    CHECK(validate_instance(inst).empty());
    CHECK(inst.exit() == VertexId(4));
    for (const auto& e : inst.edges()) {
      CHECK(e.bands.size() == 2);
      CHECK(e.bands[1].start == std::floor(e.bands[1].start));
      CHECK(e.bands[1].start >= 1.0);
      CHECK(e.bands[1].start <= 6.0);
      for (const auto& b : e.bands) {
        const auto& d = std::get<DiscreteDist>(b.dist);
        CHECK(d.outcomes.size() <= 3);
        double total = 0.0;
        for (const auto& o : d.outcomes) {
          CHECK(o.time == std::floor(o.time));
          CHECK(o.time >= 2.0);
          CHECK(o.time <= 4.0);
          total += o.probability;
        }
        CHECK(total == doctest::Approx(1.0));
      }
    }
    CHECK(save_instance(inst) == save_instance(generate_oracle_instance(oc)));
    oc.vertex_count = kMaxOracleVertices + 1;
    CHECK_THROWS(generate_oracle_instance(oc));
  }

  TEST_CASE("derived seeds are independent streams") {
    CHECK(derive_seed(1, "search") == derive_seed(1, "search"));
    CHECK(derive_seed(1, "search") != derive_seed(1, "sampler"));
    CHECK(derive_seed(1, "search") != derive_seed(2, "search"));
  }
}
