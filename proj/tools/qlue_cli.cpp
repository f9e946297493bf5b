// qlue command-line runner: dataset generation, single clustering runs and sweeps.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qlue/bench.hpp"
#include "qlue/datagen.hpp"
#include "qlue/error.hpp"
#include "qlue/result_io.hpp"

namespace fs = std::filesystem;
using namespace qlue;

namespace {

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string engine;
  std::string out;
  std::optional<std::size_t> repetitions;
  std::optional<unsigned> threads;
  std::optional<double> d_c, rho_c, delta;
  bool nh_global = false;
};

void add_common(CLI::App* cmd, Common& c, bool sweep) {
  cmd->add_option("-c,--config", c.config_path, "JSON experiment config")->check(CLI::ExistingFile);
  cmd->add_option("-s,--seed", c.seed, "base RNG seed");
  cmd->add_option("-e,--engine", c.engine, "classical or quantum")->check(CLI::IsMember({"classical", "quantum"}));
  cmd->add_option("-o,--out", c.out, "output directory (default runs/<verb>-<seed>)");
  cmd->add_option("--dc", c.d_c, "critical distance d_c");
  cmd->add_option("--rho", c.rho_c, "critical density");
  cmd->add_option("--delta", c.delta, "d_m / d_c");
  cmd->add_flag("--global-nh", c.nh_global, "search nearest highers over the whole dataset");
  if (sweep) {
    cmd->add_option("-r,--repetitions", c.repetitions, "repetitions per cell");
    cmd->add_option("-j,--threads", c.threads, "cells run concurrently");
  }
}

bench::ExperimentConfig resolve(const Common& c, bench::Experiment experiment, const std::string& verb) {
  bench::ExperimentConfig cfg;
  if (!c.config_path.empty()) cfg = bench::load_config(c.config_path);
  cfg.experiment = experiment;
  if (c.seed) cfg.rng_seed = *c.seed;
  if (!c.engine.empty()) cfg.engine = bench::engine_from_string(c.engine);
  if (c.repetitions) cfg.repetitions = *c.repetitions;
  if (c.threads) cfg.threads = *c.threads;
  if (c.d_c) cfg.params.d_c = *c.d_c;
  if (c.rho_c) cfg.params.rho_c = *c.rho_c;
  if (c.delta) cfg.params.delta = *c.delta;
  if (c.nh_global) cfg.params.nh_global = true;
  if (!c.out.empty()) cfg.output_dir = c.out;
  if (cfg.output_dir.empty()) cfg.output_dir = (fs::path("runs") / (verb + "-" + std::to_string(cfg.rng_seed))).string();
  return cfg;
}

void print_cells(const bench::RunReport& report) {
  for (const auto& cell : report.cells) {
    std::cout << cell.key.dump();
    if (!cell.fh.empty()) {
      std::cout << "  F_H " << cell.mean_fh() << " +- " << cell.std_fh() << "  F_C " << cell.mean_fc() << " +- "
                << cell.std_fc();
    }
    if (!cell.extra.empty()) std::cout << "  " << cell.extra.dump();
    std::cout << '\n';
  }
  if (!report.summary.empty()) std::cout << "summary " << report.summary.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qlue: density-peak clustering with a simulated Grover search model"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "write a synthetic dataset CSV");
  std::string gen_spec_path, gen_out, gen_family = "gaussian", gen_profile = "gradient";
  datagen::DatasetSpec gen_spec;
  gen->add_option("--spec", gen_spec_path, "JSON dataset spec")->check(CLI::ExistingFile);
  gen->add_option("-f,--family", gen_family, "gaussian|noise|two_gaussians|moons|circles|lattice");
  gen->add_option("--sigma", gen_spec.sigma, "per-axis variance");
  gen->add_option("--n-cluster", gen_spec.n_cluster);
  gen->add_option("--n-noise", gen_spec.n_noise);
  gen->add_option("--amplitude", gen_spec.amplitude);
  gen->add_option("--r", gen_spec.r, "centre separation (two_gaussians)");
  gen->add_option("--n1", gen_spec.n1);
  gen->add_option("--n2", gen_spec.n2);
  gen->add_option("--n-per-cluster", gen_spec.n_per_cluster);
  gen->add_option("--profile", gen_profile, "uniform|gradient");
  gen->add_option("--a", gen_spec.lattice_a, "lattice points per axis");
  gen->add_option("--dim", gen_spec.dim);
  gen->add_option("-s,--seed", gen_spec.rng_seed);
  gen->add_option("-o,--out", gen_out, "output directory")->required();

  // cluster
  auto* cluster = app.add_subcommand("cluster", "cluster one CSV dataset");
  Common cluster_opts;
  std::string input;
  cluster->add_option("input", input, "dataset CSV (x1..xd,energy[,true_label])")->required();
  add_common(cluster, cluster_opts, false);

  Common noise_opts, overlap_opts, shape_opts, lattice_opts;
  auto* noise = app.add_subcommand("sweep-noise", "F_H against noise fraction");
  add_common(noise, noise_opts, true);
  auto* overlap = app.add_subcommand("sweep-overlap", "F_H against separation of two Gaussians");
  add_common(overlap, overlap_opts, true);
  auto* shapes = app.add_subcommand("noncentroidal", "moons and circles under both energy profiles");
  add_common(shapes, shape_opts, true);
  auto* lattice = app.add_subcommand("lattice-scaling", "Grover versus classical query counts on lattices");
  add_common(lattice, lattice_opts, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (gen->parsed()) {
      if (!gen_spec_path.empty()) {
        std::ifstream in(gen_spec_path);
        gen_spec = datagen::spec_from_json(nlohmann::json::parse(in));
      } else {
        gen_spec.family = datagen::family_from_string(gen_family);
        gen_spec.profile = datagen::profile_from_string(gen_profile);
      }
      const auto data = datagen::generate(gen_spec);
      fs::create_directories(gen_out);
      const auto path = (fs::path(gen_out) / "dataset.csv").string();
      write_dataset_csv(path, data);
      write_json((fs::path(gen_out) / "manifest.json").string(),
                 {{"spec", datagen::to_json(gen_spec)},
                  {"dataset", "dataset.csv"},
                  {"points", data.size()},
                  {"content_hash", file_content_hash(path)}});
      std::cout << "wrote " << data.size() << " points to " << path << '\n';
      return 0;
    }

    bench::ExperimentConfig cfg;
    if (cluster->parsed()) {
      cfg = resolve(cluster_opts, bench::Experiment::Single, "cluster");
      cfg.dataset_path = input;
    } else if (noise->parsed()) {
      cfg = resolve(noise_opts, bench::Experiment::Noise, "sweep-noise");
    } else if (overlap->parsed()) {
      cfg = resolve(overlap_opts, bench::Experiment::Overlap, "sweep-overlap");
    } else if (shapes->parsed()) {
      cfg = resolve(shape_opts, bench::Experiment::NonCentroidal, "noncentroidal");
    } else {
      cfg = resolve(lattice_opts, bench::Experiment::LatticeScaling, "lattice-scaling");
    }
    cfg.validate();
    auto report = bench::run(cfg);
    bench::write_report(cfg, report);
    print_cells(report);
    std::cout << "outputs in " << cfg.output_dir << " (" << report.wall_time_s << " s)\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
  }
  return 1;
}
