#include <doctest.h>

#include <algorithm>
#include <random>

#include "helpers.hpp"
#include "qlue/qlue.hpp"

using namespace qlue;

TEST_CASE("quantum pipeline reproduces classical labels") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t dim = trial % 2 ? 3 : 2;
    auto a = qtest::random_dataset(rng, 300 + rng() % 400, dim);
    auto b = a;
    auto params = qtest::random_params(rng);
    params.nh_global = trial % 4 == 3;
    const auto classical = clue::run(a, params);
    const auto quantum = pipeline::run(b, params, 1000 + trial);
    CHECK(quantum.result == classical);
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(b[i].density == a[i].density);
      CHECK(b[i].nearest_higher == a[i].nearest_higher);
      CHECK(b[i].role == a[i].role);
    }
  }
}

TEST_CASE("ledger books all four phases and is seed-deterministic") {
  std::mt19937_64 rng(42);
  auto data = qtest::random_dataset(rng, 400, 2);
  auto copy = data;
  const Params params;
  const auto r1 = pipeline::run(data, params, 9);
  const auto r2 = pipeline::run(copy, params, 9);
  CHECK(r1.ledger.to_json() == r2.ledger.to_json());
  for (const char* phase : {pipeline::kPhaseDensity, pipeline::kPhaseNearestHigher, pipeline::kPhaseClassify,
                            pipeline::kPhaseAssign}) {
    CHECK(r1.ledger.phases().count(phase) == 1);
  }
  const auto t = r1.ledger.totals();
  CHECK(t.oracle_calls == t.diffusion_calls);
  CHECK(t.oracle_calls > 0);
  // Two find_all passes over all n points in classification.
  CHECK(r1.ledger.phase_counters(pipeline::kPhaseClassify).classical_equivalent_calls == 2 * data.size());
}

TEST_CASE("dynamic search space never shrinks within a seed") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 5; ++trial) {
    auto data = qtest::random_dataset(rng, 600, 2);
    const auto params = qtest::random_params(rng);
    const auto grid = build_grid(data, params.effective_tile_edge());
    GroverModel g(trial);
    QueryLedger ledger;
    pipeline::q_local_density(data, grid, params, g, ledger);
    pipeline::q_nearest_highers(data, grid, params, g, ledger);
    pipeline::q_classify(data, params, g, ledger);
    std::size_t current = data.size();
    std::vector<std::size_t> last;
    int passes = 0;
    pipeline::q_assign_clusters(data, grid, params, g, ledger, [&](std::size_t seed, const SearchSpace& dss) {
      if (seed != current) {
        current = seed;
        last.clear();
      }
      CHECK(std::includes(dss.tiles.begin(), dss.tiles.end(), last.begin(), last.end()));
      last = dss.tiles;
      ++passes;
    });
    CHECK(passes > 0);
  }
}

TEST_CASE("pipeline on a single point") {
  std::vector<std::vector<double>> rows{{0.0, 0.0}};
  std::vector<double> e{50.0};
  auto data = Dataset::from_rows(rows, e, {});
  const auto run = pipeline::run(data, Params{}, 1);
  CHECK(run.result.n_clusters == 1);
  CHECK(run.result.labels == std::vector<int>{0});
}
