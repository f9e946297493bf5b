#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qlue/bench.hpp"
#include "qlue/datagen.hpp"
#include "qlue/error.hpp"
#include "qlue/result_io.hpp"

using namespace qlue;
using namespace qlue::bench;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("qlue_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config parsing and validation") {
  const auto c = config_from_json(nlohmann::json::parse(R"({
    "experiment": "noise", "engine": "classical", "seed": 4, "repetitions": 3,
    "params": {"d_c": 15}, "noise": {"sigmas": [10], "ratios": [0, 0.5]}
  })"));
  CHECK(c.experiment == Experiment::Noise);
  CHECK(c.engine == Engine::Classical);
  CHECK(c.params.d_c == 15.0);
  CHECK(c.params.rho_c == 25.0);
  CHECK(c.noise_ratios.size() == 2);
  CHECK_NOTHROW(c.validate());

  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"bogus": 1})")), Error);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"engine": "analog"})")), Error);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"repetitions": "x"})")), Error);
  auto bad = c;
  bad.repetitions = 0;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = c;
  bad.sigmas.clear();
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("summary statistics") {
  CHECK(mean({1.0, 2.0, 3.0}) == 2.0);
  CHECK(stddev({1.0, 3.0}) == 1.0);
  CHECK(loglog_slope({1, 10, 100}, {2, 20, 200}) == doctest::Approx(1.0));
  CHECK(loglog_slope({1, 4, 16}, {1, 2, 4}) == doctest::Approx(0.5));
  CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
  CHECK(derive_seed(1, 2, 3) != derive_seed(1, 3, 2));
}

TEST_CASE("noise sweep: clean tight cluster scores 1, engines agree, payload reproducible") {
  ExperimentConfig c;
  c.experiment = Experiment::Noise;
  c.repetitions = 2;
  c.sigmas = {10.0};
  c.noise_ratios = {0.0, 0.2};
  c.n_cluster = 300;
  const auto q1 = run(c);
  const auto q2 = run(c);
  CHECK(q1.payload().dump() == q2.payload().dump());
  const auto* clean = q1.find({{"sigma", 10.0}, {"ratio", 0.0}});
  REQUIRE(clean != nullptr);
  for (double fh : clean->fh) CHECK(fh == 1.0);

  c.engine = Engine::Classical;
  const auto cl = run(c);
  REQUIRE(cl.cells.size() == q1.cells.size());
  for (std::size_t i = 0; i < cl.cells.size(); ++i) {
    CHECK(cl.cells[i].fh == q1.cells[i].fh);
    CHECK(cl.cells[i].fc == q1.cells[i].fc);
  }
}

TEST_CASE("lattice m = 1 costs one query either way") {
  ExperimentConfig c;
  c.experiment = Experiment::LatticeScaling;
  c.lattice_a = {1};
  c.lattice_d = {1};
  const auto r = run(c);
  REQUIRE(r.cells.size() == 1);
  CHECK(r.cells[0].extra.at("quantum_calls") == 1);
  CHECK(r.cells[0].extra.at("classical_calls") == 1);
}

TEST_CASE("single run round trip and artifacts") {
  const auto dir = scratch("single");
  fs::create_directories(dir);
  datagen::DatasetSpec spec;
  spec.n_cluster = 200;
  spec.n_noise = 40;
  spec.rng_seed = 12;
  const auto data = datagen::generate(spec);
  const auto csv = (dir / "data.csv").string();
  write_dataset_csv(csv, data);

  ExperimentConfig c;
  c.output_dir = (dir / "out").string();
  c.dataset_path = csv;
  auto report = run_single(c, csv);
  write_report(c, report);
  for (const char* f : {"report.json", "cells.csv", "manifest.json", "result.csv"}) {
    CHECK(fs::exists(dir / "out" / f));
  }
  const auto manifest = nlohmann::json::parse(slurp(dir / "out" / "manifest.json"));
  CHECK(manifest.at("dataset_hash") == file_content_hash(csv));

  // Re-ingesting the written dataset reproduces the labels.
  std::ifstream res(dir / "out" / "result.csv");
  const auto labels = read_result_labels(res);
  auto again = read_dataset_csv(csv);
  const auto rerun = cluster_with(Engine::Classical, again, c.params, 0);
  CHECK(labels == rerun.result.labels);

  const auto empty = (dir / "empty.csv").string();
  std::ofstream(empty).close();
  CHECK_THROWS_AS(run_single(c, empty), Error);
  fs::remove_all(dir);
}

TEST_CASE("noncentroidal writes point dumps and scores both profiles") {
  const auto dir = scratch("shapes");
  ExperimentConfig c;
  c.experiment = Experiment::NonCentroidal;
  c.repetitions = 1;
  c.points_per_cluster = 200;
  c.output_dir = dir.string();
  const auto r = run(c);
  CHECK(r.cells.size() == 4);
  CHECK(r.artifacts.size() == 4);
  for (const auto& a : r.artifacts) CHECK(fs::exists(dir / a));
  fs::remove_all(dir);
}
