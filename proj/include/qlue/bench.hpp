#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qlue/clue.hpp"
#include "qlue/grover.hpp"
#include "qlue/metrics.hpp"

namespace qlue::bench {

enum class Experiment { Noise, Overlap, NonCentroidal, LatticeScaling, Single };
enum class Engine { Classical, Quantum };

const char* to_string(Experiment e) noexcept;
const char* to_string(Engine e) noexcept;
Engine engine_from_string(const std::string& s);
Experiment experiment_from_string(const std::string& s);

struct ExperimentConfig {
  Experiment experiment = Experiment::Single;
  Engine engine = Engine::Quantum;
  std::uint64_t rng_seed = 1;
  std::size_t repetitions = 30;
  Params params;  // d_c = 20, rho_c = 25, delta = 2

  // noise sweep
  std::vector<double> sigmas{10.0, 32.0};
  std::vector<double> noise_ratios{0.0, 0.1, 0.2, 0.33, 0.5, 0.75, 1.0};
  std::size_t n_cluster = 750;
  double amplitude = 500.0;
  double noise_side = 500.0;

  // overlap sweep
  double overlap_sigma = 30.0;
  std::size_t overlap_n1 = 500;
  std::vector<double> r_over_sigma{0.25, 0.5, 1.0, 1.5, 2.0, 2.67, 3.0, 4.0, 6.0, 10.0};
  std::vector<double> n1_over_n2{1.0, 2.0};

  // non-centroidal
  std::size_t points_per_cluster = 500;
  double shape_scale = 100.0;
  double shape_jitter = 0.05;

  // lattice scaling
  std::vector<std::size_t> lattice_a{3, 10};
  std::vector<std::size_t> lattice_d{1, 2, 3, 4, 5};
  std::size_t max_lattice_points = std::size_t{1} << 20;

  std::string output_dir;
  std::string dataset_path;
  unsigned threads = 1;

  /// Throws Config on empty grids, zero repetitions or invalid params.
  void validate() const;
};

nlohmann::json to_json(const ExperimentConfig& c);
/// Missing keys keep their defaults; unknown keys are rejected.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

/// Labels plus the query ledger (empty for the classical engine).
struct EngineRun {
  ClusterResult result;
  QueryLedger ledger;
};

EngineRun cluster_with(Engine engine, Dataset& data, const Params& params, std::uint64_t seed);

struct Cell {
  nlohmann::json key;
  std::vector<double> fh;
  std::vector<double> fc;
  std::vector<int> n_clusters;
  std::vector<QueryLedger::Counters> ledgers;
  nlohmann::json extra = nlohmann::json::object();

  double mean_fh() const;
  double std_fh() const;
  double mean_fc() const;
  double std_fc() const;
  nlohmann::json to_json() const;
};

struct RunReport {
  nlohmann::json config;
  std::vector<Cell> cells;
  nlohmann::json summary = nlohmann::json::object();
  std::vector<std::string> artifacts;
  double wall_time_s = 0.0;

  /// Deterministic part of the report (no timings).
  nlohmann::json payload() const;
  const Cell* find(const nlohmann::json& key) const;
};

double mean(const std::vector<double>& v);
/// Population standard deviation.
double stddev(const std::vector<double>& v);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Seed for repetition `rep` of cell `cell`, derived from the base seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t cell, std::uint64_t rep);

RunReport run_noise_sweep(const ExperimentConfig& config);
RunReport run_overlap_sweep(const ExperimentConfig& config);
RunReport run_noncentroidal(const ExperimentConfig& config);
RunReport run_lattice_scaling(const ExperimentConfig& config);
RunReport run_single(const ExperimentConfig& config, const std::string& dataset_path);

RunReport run(const ExperimentConfig& config);

/// Writes report.json, cells.csv and manifest.json into config.output_dir.
void write_report(const ExperimentConfig& config, RunReport& report);

}  // namespace qlue::bench
