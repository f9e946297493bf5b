#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "helpers.hpp"
#include "qlue/error.hpp"
#include "qlue/grover.hpp"

using namespace qlue;

TEST_CASE("iteration counts") {
  CHECK(grover_iterations(16, 1) == 4);
  CHECK(grover_iterations(16, 16) == 1);
  CHECK(grover_iterations(64, 0) == 7);
  CHECK(grover_iterations(1, 1) == 1);
  CHECK(grover_iterations(1, 0) == 1);
}

TEST_CASE("find_one charges one run and returns a marked item") {
  GroverModel g(3);
  QueryLedger ledger;
  std::vector<std::size_t> domain(16);
  std::iota(domain.begin(), domain.end(), 0);
  const auto out = g.find_one(domain, [](std::size_t i) { return i == 9; }, ledger);
  CHECK(out.found == std::optional<std::size_t>(9));
  CHECK(out.queries_charged == 4);
  CHECK(ledger.totals().oracle_calls == 4);
  CHECK(ledger.totals().diffusion_calls == 4);
  CHECK(ledger.totals().invocations == 1);
  CHECK(ledger.totals().classical_equivalent_calls == 16);

  const auto none = g.find_one(domain, [](std::size_t) { return false; }, ledger);
  CHECK_FALSE(none.found);
  CHECK(none.queries_charged == 4);
  CHECK_THROWS_AS(g.find_one(std::vector<std::size_t>{}, [](std::size_t) { return true; }, ledger), Error);
}

TEST_CASE("find_all returns exactly the marked set within the charge bound") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t m = 1 + rng() % 300;
    std::vector<std::size_t> domain(m);
    std::iota(domain.begin(), domain.end(), 1000);
    std::set<std::size_t> marked;
    const std::size_t k = rng() % (m + 1);
    while (marked.size() < k) marked.insert(1000 + rng() % m);
    GroverModel g(trial);
    QueryLedger ledger;
    auto found = g.find_all(domain, [&](std::size_t i) { return marked.count(i) > 0; }, ledger);
    std::sort(found.begin(), found.end());
    CHECK(std::equal(found.begin(), found.end(), marked.begin(), marked.end()));
    std::uint64_t bound = 0;
    for (std::size_t r = 0; r < k; ++r) bound += grover_iterations(m - r, k - r);
    bound += grover_iterations(std::max<std::size_t>(m - k, 1), 0);
    CHECK(ledger.totals().oracle_calls == bound);
    CHECK(ledger.totals().invocations == k + 1);
    CHECK(ledger.totals().classical_equivalent_calls == m);
  }
}

TEST_CASE("ledger phases and json") {
  QueryLedger ledger;
  ledger.set_phase("a");
  ledger.charge_grover(3);
  ledger.set_phase("b");
  ledger.charge_grover(2);
  ledger.charge_classical(10);
  CHECK(ledger.phase_counters("a").oracle_calls == 3);
  CHECK(ledger.phase_counters("b").classical_equivalent_calls == 10);
  CHECK(ledger.phase_counters("missing").oracle_calls == 0);
  const auto j = ledger.to_json();
  CHECK(j.at("total").at("oracle_calls") == 5);
  CHECK(j.at("b").at("invocations") == 1);
  QueryLedger other;
  other.merge(ledger);
  other.merge(ledger);
  CHECK(other.totals().oracle_calls == 10);
}

TEST_CASE("GEBS finds the linear-scan nearest higher within its charge bound") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 8; ++trial) {
    auto data = qtest::random_dataset(rng, 300, 2);
    const auto params = qtest::random_params(rng);
    const auto grid = build_grid(data, params.effective_tile_edge());
    clue::local_density(data, grid, params);
    const auto th = Thresholds::from(params, data.quantizer());
    GroverModel g(trial);
    for (std::size_t j = 0; j < data.size(); ++j) {
      QueryLedger ledger;
      const auto res = g.gebs_nearest_higher(data, grid, j, params, ledger);
      const auto expected = qtest::linear_scan_nh(data, j, th.dm2);
      CHECK(res.index == expected.index);
      CHECK(res.dist2 == expected.dist2);
      // Each candidate costs at most one Y run and one B run, plus the final miss.
      CHECK(res.runs <= 2 * res.candidates + 1);
      const auto space = grid.points_in(search_space(grid, data[j].coords, th.dm_raw));
      CHECK(res.queries <= res.runs * grover_iterations(space.size(), 0));
      CHECK(ledger.totals().oracle_calls == res.queries);
    }
  }
}
