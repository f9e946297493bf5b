#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "helpers.hpp"
#include "qlue/error.hpp"
#include "qlue/tile_grid.hpp"

using namespace qlue;

TEST_CASE("quantizer round trip and range") {
  Quantizer q(16);
  CHECK(q.encode(1.0) == 65536);
  CHECK(q.encode(-2.5) == -163840);
  CHECK(q.decode(q.encode(3.25)) == 3.25);
  CHECK(q.encode_squared(2.0) == static_cast<Dist2>(131072) * 131072);
  CHECK(q.decode_distance(q.encode_squared(7.0)) == doctest::Approx(7.0));
  CHECK_THROWS_AS(q.encode(std::nan("")), Error);
  CHECK_THROWS_AS(q.encode(1e30), Error);
  CHECK_THROWS_AS(Quantizer(0), Error);
}

TEST_CASE("params validation") {
  Params p;
  CHECK_NOTHROW(p.validate());
  CHECK(p.d_m() == 40.0);
  CHECK(p.effective_tile_edge() == 20.0);
  p.d_c = 0.0;
  CHECK_THROWS_AS(p.validate(), Error);
  p = Params{};
  p.delta = -1.0;
  CHECK_THROWS_AS(p.validate(), Error);
}

TEST_CASE("dataset CSV round trip keeps coordinates and labels") {
  std::vector<std::vector<double>> rows{{0.0, 1.5}, {-3.25, 8.0}, {100.0, -0.125}};
  std::vector<double> e{1.0, 2.5, 0.0};
  std::vector<int> labels{0, 1, -1};
  auto data = Dataset::from_rows(rows, e, labels);
  std::stringstream ss;
  write_dataset_csv(ss, data);
  auto back = read_dataset_csv(ss);
  REQUIRE(back.size() == 3);
  CHECK(back.dim() == 2);
  CHECK(back.true_labels() == labels);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(back[i].coords == data[i].coords);
    CHECK(back[i].energy == data[i].energy);
  }
}

TEST_CASE("dataset CSV errors") {
  std::stringstream empty;
  CHECK_THROWS_AS(read_dataset_csv(empty), Error);
  std::stringstream bad("x1,energy\n1.0,abc\n");
  CHECK_THROWS_AS(read_dataset_csv(bad), Error);
  std::stringstream negative("x1,energy\n1.0,-1\n");
  CHECK_THROWS_AS(read_dataset_csv(negative), Error);
}

TEST_CASE("grid partitions every point exactly once") {
  std::mt19937_64 rng(7);
  for (std::size_t dim : {1u, 2u, 3u}) {
    auto data = qtest::random_dataset(rng, 400, dim);
    const auto grid = build_grid(data, 13.0);
    std::vector<int> seen(data.size(), 0);
    for (std::size_t t = 0; t < grid.tile_count(); ++t) {
      for (std::size_t i : grid.bucket(t)) {
        ++seen[i];
        CHECK(grid.tile_of(data[i].coords) == t);
      }
    }
    CHECK(std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; }));
  }
}

TEST_CASE("search space covers every point within the radius and grows with it") {
  std::mt19937_64 rng(11);
  auto data = qtest::random_dataset(rng, 500, 2);
  const auto grid = build_grid(data, 10.0);
  for (std::size_t j = 0; j < data.size(); j += 17) {
    std::size_t previous = 0;
    for (double r : {3.0, 10.0, 25.0, 60.0}) {
      const auto space = search_space(grid, data[j].coords, data.quantizer().encode(r));
      const auto pts = grid.points_in(space);
      CHECK(pts.size() == space.point_count);
      CHECK(pts.size() >= previous);
      previous = pts.size();
      const std::set<std::size_t> in(pts.begin(), pts.end());
      const Dist2 r2 = data.quantizer().encode_squared(r);
      for (std::size_t i = 0; i < data.size(); ++i) {
        if (data.dist2(i, j) <= r2) CHECK(in.count(i) == 1);
      }
    }
  }
}

TEST_CASE("dynamic search space is monotone in its members") {
  std::mt19937_64 rng(5);
  auto data = qtest::random_dataset(rng, 300, 2);
  const auto grid = build_grid(data, 20.0);
  std::vector<std::size_t> members;
  std::vector<std::size_t> last;
  for (std::size_t i = 0; i < 40; ++i) {
    members.push_back((i * 37) % data.size());
    const auto dss = dynamic_search_space(grid, data, members, 40.0);
    CHECK(std::includes(dss.tiles.begin(), dss.tiles.end(), last.begin(), last.end()));
    last = dss.tiles;
  }
  CHECK_THROWS_AS(dynamic_search_space(grid, data, std::vector<std::size_t>{}, 40.0), Error);
  CHECK_THROWS_AS(dynamic_search_space(grid, data, std::vector<std::size_t>{data.size()}, 40.0), Error);
}

TEST_CASE("grid rejects empty data") {
  Dataset empty(2, 16);
  CHECK_THROWS_AS(build_grid(empty, 1.0), Error);
}
