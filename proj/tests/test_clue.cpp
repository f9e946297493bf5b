#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "qlue/clue.hpp"
#include "qlue/error.hpp"

using namespace qlue;

TEST_CASE("local density matches the all-pairs sum") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    auto data = qtest::random_dataset(rng, 400, trial % 2 ? 3 : 2);
    const auto params = qtest::random_params(rng);
    const auto grid = build_grid(data, params.effective_tile_edge());
    clue::local_density(data, grid, params);
    const auto expected = qtest::all_pairs_density(data, params);
    for (std::size_t j = 0; j < data.size(); ++j) CHECK(data[j].density == expected[j]);
  }
}

TEST_CASE("nearest highers match a linear scan and form a forest") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 10; ++trial) {
    auto data = qtest::random_dataset(rng, 400, 2);
    auto params = qtest::random_params(rng);
    params.nh_global = trial % 3 == 0;
    const auto grid = build_grid(data, params.effective_tile_edge());
    clue::local_density(data, grid, params);
    clue::nearest_highers(data, grid, params);
    const auto th = Thresholds::from(params, data.quantizer());
    for (std::size_t j = 0; j < data.size(); ++j) {
      const auto nh = qtest::linear_scan_nh(data, j, params.nh_global ? kInfDist2 : th.dm2);
      CHECK(data[j].nearest_higher == nh.index);
      CHECK(data[j].nh_dist2 == nh.dist2);
      // Density strictly increases along NH links, so there are no cycles.
      if (data[j].nearest_higher) CHECK(data[*data[j].nearest_higher].density > data[j].density);
    }
  }
}

TEST_CASE("classification thresholds") {
  Params params;
  const auto th = Thresholds::from(params, Quantizer(16));
  Point p;
  p.density = 30.0;
  p.nh_dist2 = th.dc2 + 1;
  CHECK(clue::classify_point(p, params, th) == Role::Seed);
  p.nh_dist2 = th.dc2;
  CHECK(clue::classify_point(p, params, th) == Role::Follower);
  p.density = 10.0;
  p.nh_dist2 = th.dm2 + 1;
  CHECK(clue::classify_point(p, params, th) == Role::Outlier);
  p.nh_dist2 = th.dm2;
  CHECK(clue::classify_point(p, params, th) == Role::Follower);
  p.density = params.rho_c;
  p.nh_dist2 = kInfDist2;
  CHECK(clue::classify_point(p, params, th) == Role::Follower);
}

TEST_CASE("single point is a seed or an outlier depending on its density") {
  std::vector<std::vector<double>> rows{{1.0, 1.0}};
  std::vector<double> heavy{100.0}, light{1.0};
  auto a = Dataset::from_rows(rows, heavy, {});
  auto r = clue::run(a, Params{});
  CHECK(r.n_clusters == 1);
  CHECK(r.labels == std::vector<int>{0});
  auto b = Dataset::from_rows(rows, light, {});
  r = clue::run(b, Params{});
  CHECK(r.n_clusters == 0);
  CHECK(r.outliers == std::vector<std::size_t>{0});
  CHECK(r.labels == std::vector<int>{-1});
}

TEST_CASE("two separated blobs give two clusters") {
  std::vector<std::vector<double>> rows;
  std::vector<double> e;
  for (int i = 0; i < 5; ++i) {
    rows.push_back({double(i), 0.0});
    rows.push_back({200.0 + i, 0.0});
    e.push_back(i == 2 ? 20.0 : 10.0);
    e.push_back(i == 2 ? 20.0 : 10.0);
  }
  auto data = Dataset::from_rows(rows, e, {});
  const auto r = clue::run(data, Params{});
  CHECK(r.n_clusters == 2);
  for (std::size_t i = 0; i < rows.size(); i += 2) {
    CHECK(r.labels[i] == r.labels[0]);
    CHECK(r.labels[i + 1] == r.labels[1]);
  }
  CHECK(r.labels[0] != r.labels[1]);
}

TEST_CASE("followers share their nearest higher's cluster") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    auto data = qtest::random_dataset(rng, 500, 2);
    const auto params = qtest::random_params(rng);
    const auto r = clue::run(data, params);
    for (std::size_t i = 0; i < data.size(); ++i) {
      const auto& p = data[i];
      if (p.role == Role::Seed) CHECK(r.labels[i] >= 0);
      if (p.role == Role::Outlier) CHECK(r.labels[i] == -1);
      if (p.role == Role::Follower && r.labels[i] >= 0) CHECK(r.labels[*p.nearest_higher] == r.labels[i]);
    }
    // Seeds are ordered by descending density.
    for (std::size_t c = 1; c < r.seeds.size(); ++c) CHECK(data[r.seeds[c - 1]].density >= data[r.seeds[c]].density);
  }
}

TEST_CASE("run rejects empty data and mismatched precision") {
  Dataset empty(2, 16);
  CHECK_THROWS_AS(clue::run(empty, Params{}), Error);
  std::vector<std::vector<double>> rows{{0.0}};
  std::vector<double> e{1.0};
  auto coarse = Dataset::from_rows(rows, e, {}, 8);
  CHECK_THROWS_AS(clue::run(coarse, Params{}), Error);
}
