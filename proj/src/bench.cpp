#include "qlue/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <set>
#include <sstream>
#include <thread>

#include "qlue/datagen.hpp"
#include "qlue/error.hpp"
#include "qlue/qlue.hpp"
#include "qlue/result_io.hpp"

namespace qlue::bench {

namespace fs = std::filesystem;
using nlohmann::json;

const char* to_string(Experiment e) noexcept {
  switch (e) {
    case Experiment::Noise: return "noise";
    case Experiment::Overlap: return "overlap";
    case Experiment::NonCentroidal: return "noncentroidal";
    case Experiment::LatticeScaling: return "lattice_scaling";
    case Experiment::Single: return "single";
  }
  return "?";
}

const char* to_string(Engine e) noexcept { return e == Engine::Classical ? "classical" : "quantum"; }

Engine engine_from_string(const std::string& s) {
  if (s == "classical") return Engine::Classical;
  if (s == "quantum") return Engine::Quantum;
  throw Error(ErrorCode::Config, "unknown engine '" + s + "' (expected classical or quantum)");
}

Experiment experiment_from_string(const std::string& s) {
  for (Experiment e : {Experiment::Noise, Experiment::Overlap, Experiment::NonCentroidal, Experiment::LatticeScaling,
                       Experiment::Single}) {
    if (s == to_string(e)) return e;
  }
  throw Error(ErrorCode::Config, "unknown experiment '" + s + "'");
}

void ExperimentConfig::validate() const {
  if (repetitions < 1) throw Error(ErrorCode::Config, "repetitions must be >= 1");
  if (threads < 1) throw Error(ErrorCode::Config, "threads must be >= 1");
  try {
    params.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::Config, e.what());
  }
  auto non_empty = [](bool empty, const char* what) {
    if (empty) throw Error(ErrorCode::Config, std::string(what) + " grid is empty");
  };
  auto positive = [](const std::vector<double>& v, const char* what, bool allow_zero) {
    for (double x : v) {
      if (!std::isfinite(x) || x < 0.0 || (!allow_zero && x == 0.0)) {
        throw Error(ErrorCode::Config, std::string(what) + " values must be " + (allow_zero ? "non-negative" : "positive"));
      }
    }
  };
  switch (experiment) {
    case Experiment::Noise:
      non_empty(sigmas.empty(), "sigma");
      non_empty(noise_ratios.empty(), "noise ratio");
      positive(sigmas, "sigma", false);
      positive(noise_ratios, "noise ratio", true);
      if (n_cluster == 0) throw Error(ErrorCode::Config, "n_cluster must be >= 1");
      break;
    case Experiment::Overlap:
      non_empty(r_over_sigma.empty(), "r/sigma");
      non_empty(n1_over_n2.empty(), "N1/N2");
      positive(r_over_sigma, "r/sigma", true);
      positive(n1_over_n2, "N1/N2", false);
      if (!(overlap_sigma > 0.0)) throw Error(ErrorCode::Config, "overlap sigma must be positive");
      if (overlap_n1 == 0) throw Error(ErrorCode::Config, "overlap n1 must be >= 1");
      break;
    case Experiment::NonCentroidal:
      if (points_per_cluster == 0) throw Error(ErrorCode::Config, "points_per_cluster must be >= 1");
      break;
    case Experiment::LatticeScaling:
      non_empty(lattice_a.empty(), "lattice a");
      non_empty(lattice_d.empty(), "lattice d");
      for (auto a : lattice_a) {
        if (a < 1) throw Error(ErrorCode::Config, "lattice a must be >= 1");
      }
      for (auto d : lattice_d) {
        if (d < 1) throw Error(ErrorCode::Config, "lattice d must be >= 1");
      }
      break;
    case Experiment::Single:
      if (dataset_path.empty()) throw Error(ErrorCode::Config, "single run needs a dataset path");
      break;
  }
}

json to_json(const ExperimentConfig& c) {
  return json{
      {"experiment", to_string(c.experiment)},
      {"engine", to_string(c.engine)},
      {"seed", c.rng_seed},
      {"repetitions", c.repetitions},
      {"params",
       {{"d_c", c.params.d_c},
        {"delta", c.params.delta},
        {"rho_c", c.params.rho_c},
        {"tile_edge", c.params.tile_edge},
        {"precision_bits", c.params.precision_bits},
        {"nh_global", c.params.nh_global}}},
      {"noise",
       {{"sigmas", c.sigmas},
        {"ratios", c.noise_ratios},
        {"n_cluster", c.n_cluster},
        {"amplitude", c.amplitude},
        {"noise_side", c.noise_side}}},
      {"overlap",
       {{"sigma", c.overlap_sigma}, {"n1", c.overlap_n1}, {"r_over_sigma", c.r_over_sigma}, {"n1_over_n2", c.n1_over_n2}}},
      {"noncentroidal", {{"points_per_cluster", c.points_per_cluster}, {"scale", c.shape_scale}, {"jitter", c.shape_jitter}}},
      {"lattice", {{"a", c.lattice_a}, {"d", c.lattice_d}, {"max_points", c.max_lattice_points}}},
      {"output_dir", c.output_dir},
      {"dataset", c.dataset_path},
      {"threads", c.threads},
  };
}

namespace {

void reject_unknown(const json& j, std::initializer_list<const char*> known, const std::string& where) {
  if (!j.is_object()) throw Error(ErrorCode::Config, where + " must be an object");
  for (const auto& [key, value] : j.items()) {
    if (std::find_if(known.begin(), known.end(), [&](const char* k) { return key == k; }) == known.end()) {
      throw Error(ErrorCode::Config, "unknown key '" + key + "' in " + where);
    }
  }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig c;
  try {
    reject_unknown(j,
                   {"experiment", "engine", "seed", "repetitions", "params", "noise", "overlap", "noncentroidal",
                    "lattice", "output_dir", "dataset", "threads"},
                   "config");
    if (j.contains("experiment")) c.experiment = experiment_from_string(j.at("experiment").get<std::string>());
    if (j.contains("engine")) c.engine = engine_from_string(j.at("engine").get<std::string>());
    read(j, "seed", c.rng_seed);
    read(j, "repetitions", c.repetitions);
    read(j, "output_dir", c.output_dir);
    read(j, "dataset", c.dataset_path);
    read(j, "threads", c.threads);
    if (j.contains("params")) {
      const auto& p = j.at("params");
      reject_unknown(p, {"d_c", "delta", "rho_c", "tile_edge", "precision_bits", "nh_global"}, "params");
      read(p, "d_c", c.params.d_c);
      read(p, "delta", c.params.delta);
      read(p, "rho_c", c.params.rho_c);
      read(p, "tile_edge", c.params.tile_edge);
      read(p, "precision_bits", c.params.precision_bits);
      read(p, "nh_global", c.params.nh_global);
    }
    if (j.contains("noise")) {
      const auto& n = j.at("noise");
      reject_unknown(n, {"sigmas", "ratios", "n_cluster", "amplitude", "noise_side"}, "noise");
      read(n, "sigmas", c.sigmas);
      read(n, "ratios", c.noise_ratios);
      read(n, "n_cluster", c.n_cluster);
      read(n, "amplitude", c.amplitude);
      read(n, "noise_side", c.noise_side);
    }
    if (j.contains("overlap")) {
      const auto& o = j.at("overlap");
      reject_unknown(o, {"sigma", "n1", "r_over_sigma", "n1_over_n2"}, "overlap");
      read(o, "sigma", c.overlap_sigma);
      read(o, "n1", c.overlap_n1);
      read(o, "r_over_sigma", c.r_over_sigma);
      read(o, "n1_over_n2", c.n1_over_n2);
    }
    if (j.contains("noncentroidal")) {
      const auto& s = j.at("noncentroidal");
      reject_unknown(s, {"points_per_cluster", "scale", "jitter"}, "noncentroidal");
      read(s, "points_per_cluster", c.points_per_cluster);
      read(s, "scale", c.shape_scale);
      read(s, "jitter", c.shape_jitter);
    }
    if (j.contains("lattice")) {
      const auto& l = j.at("lattice");
      reject_unknown(l, {"a", "d", "max_points"}, "lattice");
      read(l, "a", c.lattice_a);
      read(l, "d", c.lattice_d);
      read(l, "max_points", c.max_lattice_points);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Config, std::string("bad config value: ") + e.what());
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open config " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Config, path + ": " + e.what());
  }
  return config_from_json(j);
}

EngineRun cluster_with(Engine engine, Dataset& data, const Params& params, std::uint64_t seed) {
  EngineRun out;
  if (engine == Engine::Classical) {
    out.result = clue::run(data, params);
  } else {
    auto run = pipeline::run(data, params, seed);
    out.result = std::move(run.result);
    out.ledger = std::move(run.ledger);
  }
  return out;
}

double mean(const std::vector<double>& v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double stddev(const std::vector<double>& v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size()));
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw Error(ErrorCode::InvalidInput, "slope fit needs >= 2 paired samples");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw Error(ErrorCode::InvalidInput, "log-log fit needs positive samples");
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw Error(ErrorCode::InvalidInput, "log-log fit needs distinct x values");
  return (n * sxy - sx * sy) / denom;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t cell, std::uint64_t rep) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(base) ^ cell) ^ (rep * 0x632be59bd9b4e019ULL));
}

double Cell::mean_fh() const { return mean(fh); }
double Cell::std_fh() const { return stddev(fh); }
double Cell::mean_fc() const { return mean(fc); }
double Cell::std_fc() const { return stddev(fc); }

namespace {

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

QueryLedger::Counters ledger_sum(const std::vector<QueryLedger::Counters>& v) {
  QueryLedger::Counters s;
  for (const auto& c : v) s += c;
  return s;
}

}  // namespace

json Cell::to_json() const {
  json j = {{"key", key}};
  if (!fh.empty()) {
    j["mean_fh"] = finite_or_null(mean_fh());
    j["std_fh"] = finite_or_null(std_fh());
    j["mean_fc"] = finite_or_null(mean_fc());
    j["std_fc"] = finite_or_null(std_fc());
    j["fh"] = fh;
    j["fc"] = fc;
    j["n_clusters"] = n_clusters;
  }
  if (!ledgers.empty()) {
    const auto s = ledger_sum(ledgers);
    const double reps = static_cast<double>(ledgers.size());
    j["ledger"] = {{"oracle_calls", s.oracle_calls},
                   {"diffusion_calls", s.diffusion_calls},
                   {"classical_equivalent_calls", s.classical_equivalent_calls},
                   {"invocations", s.invocations},
                   {"mean_oracle_calls", static_cast<double>(s.oracle_calls) / reps},
                   {"mean_classical_equivalent_calls", static_cast<double>(s.classical_equivalent_calls) / reps}};
  }
  if (!extra.empty()) j["extra"] = extra;
  return j;
}

json RunReport::payload() const {
  json cells_json = json::array();
  for (const auto& c : cells) cells_json.push_back(c.to_json());
  return json{{"config", config}, {"cells", cells_json}, {"summary", summary}, {"artifacts", artifacts}};
}

const Cell* RunReport::find(const json& key) const {
  for (const auto& c : cells) {
    if (c.key == key) return &c;
  }
  return nullptr;
}

namespace {

/// Runs fn(i) for i in [0, n) on up to `threads` workers; results land by index.
void for_each_cell(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
  const unsigned workers = std::min<std::size_t>(std::max(1u, threads), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = next++; i < n; i = next++) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
        next = n;
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

void score_into(Cell& cell, const Dataset& data, const EngineRun& run, bool unit_energy) {
  const auto s = unit_energy ? metrics::unit_energy_scores(run.result.labels, data.true_labels())
                             : metrics::scores(run.result.labels, data.true_labels(), data.energies());
  cell.fh.push_back(s.homogeneity);
  cell.fc.push_back(s.completeness);
  cell.n_clusters.push_back(run.result.n_clusters);
  cell.ledgers.push_back(run.ledger.totals());
}

RunReport start_report(const ExperimentConfig& config) {
  config.validate();
  RunReport r;
  r.config = to_json(config);
  return r;
}

}  // namespace

RunReport run_noise_sweep(const ExperimentConfig& config) {
  Timer timer;
  auto report = start_report(config);
  std::vector<std::pair<double, double>> grid;
  for (double s : config.sigmas) {
    for (double ratio : config.noise_ratios) grid.emplace_back(s, ratio);
  }
  report.cells.resize(grid.size());
  for_each_cell(grid.size(), config.threads, [&](std::size_t idx) {
    const auto [sigma, ratio] = grid[idx];
    Cell& cell = report.cells[idx];
    cell.key = {{"sigma", sigma}, {"ratio", ratio}};
    for (std::size_t rep = 0; rep < config.repetitions; ++rep) {
      datagen::DatasetSpec spec;
      spec.family = datagen::Family::GaussianCluster;
      spec.sigma = sigma;
      spec.n_cluster = config.n_cluster;
      spec.n_noise = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(config.n_cluster)));
      spec.amplitude = config.amplitude;
      spec.noise_side = config.noise_side;
      spec.precision_bits = config.params.precision_bits;
      spec.rng_seed = derive_seed(config.rng_seed, idx, rep);
      auto data = datagen::generate(spec);
      const auto run = cluster_with(config.engine, data, config.params, derive_seed(spec.rng_seed, 0xC1, rep));
      score_into(cell, data, run, false);
    }
  });
  report.wall_time_s = timer.seconds();
  return report;
}

RunReport run_overlap_sweep(const ExperimentConfig& config) {
  Timer timer;
  auto report = start_report(config);
  std::vector<std::pair<double, double>> grid;
  for (double n_ratio : config.n1_over_n2) {
    for (double rs : config.r_over_sigma) grid.emplace_back(rs, n_ratio);
  }
  report.cells.resize(grid.size());
  for_each_cell(grid.size(), config.threads, [&](std::size_t idx) {
    const auto [rs, n_ratio] = grid[idx];
    Cell& cell = report.cells[idx];
    cell.key = {{"r_over_sigma", rs}, {"n1_over_n2", n_ratio}};
    for (std::size_t rep = 0; rep < config.repetitions; ++rep) {
      datagen::DatasetSpec spec;
      spec.family = datagen::Family::TwoGaussians;
      spec.sigma = config.overlap_sigma;
      spec.r = rs * config.overlap_sigma;
      spec.n1 = config.overlap_n1;
      spec.n2 = std::max<std::size_t>(
          1, static_cast<std::size_t>(std::llround(static_cast<double>(config.overlap_n1) / n_ratio)));
      spec.amplitude = config.amplitude;
      spec.precision_bits = config.params.precision_bits;
      spec.rng_seed = derive_seed(config.rng_seed, idx, rep);
      auto data = datagen::generate(spec);
      const auto run = cluster_with(config.engine, data, config.params, derive_seed(spec.rng_seed, 0xC1, rep));
      score_into(cell, data, run, false);
    }
  });
  report.wall_time_s = timer.seconds();
  return report;
}

namespace {

void write_point_dump(const std::string& path, const Dataset& data, const ClusterResult& result) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  out << std::setprecision(17);
  for (std::size_t a = 0; a < data.dim(); ++a) out << 'x' << (a + 1) << ',';
  out << "energy,true_label,label\n";
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (std::size_t a = 0; a < data.dim(); ++a) out << data.coord(i, a) << ',';
    out << data[i].energy << ',' << data.true_labels()[i] << ',' << result.labels[i] << '\n';
  }
}

}  // namespace

RunReport run_noncentroidal(const ExperimentConfig& config) {
  Timer timer;
  auto report = start_report(config);
  const std::vector<datagen::Family> families{datagen::Family::Moons, datagen::Family::Circles};
  const std::vector<datagen::EnergyProfile> profiles{datagen::EnergyProfile::Uniform, datagen::EnergyProfile::Gradient};
  const std::size_t n_cells = families.size() * profiles.size();
  report.cells.resize(n_cells);
  std::vector<std::string> dumps(n_cells);
  for_each_cell(n_cells, config.threads, [&](std::size_t idx) {
    const auto family = families[idx / profiles.size()];
    const auto profile = profiles[idx % profiles.size()];
    Cell& cell = report.cells[idx];
    cell.key = {{"dataset", datagen::to_string(family)}, {"profile", datagen::to_string(profile)}};
    for (std::size_t rep = 0; rep < config.repetitions; ++rep) {
      datagen::DatasetSpec spec;
      spec.family = family;
      spec.profile = profile;
      spec.n_per_cluster = config.points_per_cluster;
      spec.scale = config.shape_scale;
      spec.jitter = config.shape_jitter;
      spec.precision_bits = config.params.precision_bits;
      // Both profiles see the same point cloud for a given repetition.
      spec.rng_seed = derive_seed(config.rng_seed, idx / profiles.size(), rep);
      auto data = datagen::generate(spec);
      const auto run = cluster_with(config.engine, data, config.params, derive_seed(spec.rng_seed, 0xC1, rep));
      score_into(cell, data, run, true);
      if (rep == 0 && !config.output_dir.empty()) {
        fs::create_directories(config.output_dir);
        const std::string name =
            std::string("points_") + datagen::to_string(family) + "_" + datagen::to_string(profile) + ".csv";
        write_point_dump((fs::path(config.output_dir) / name).string(), data, run.result);
        dumps[idx] = name;
      }
    }
  });
  for (auto& d : dumps) {
    if (!d.empty()) report.artifacts.push_back(d);
  }
  for (std::size_t f = 0; f < families.size(); ++f) {
    const auto& uni = report.cells[f * profiles.size()];
    const auto& grad = report.cells[f * profiles.size() + 1];
    report.summary[datagen::to_string(families[f])] = {{"mean_fc_uniform", finite_or_null(uni.mean_fc())},
                                                      {"mean_fc_gradient", finite_or_null(grad.mean_fc())},
                                                      {"mean_fh_uniform", finite_or_null(uni.mean_fh())},
                                                      {"mean_fh_gradient", finite_or_null(grad.mean_fh())}};
  }
  report.wall_time_s = timer.seconds();
  return report;
}

RunReport run_lattice_scaling(const ExperimentConfig& config) {
  Timer timer;
  auto report = start_report(config);
  std::vector<std::pair<std::size_t, std::size_t>> grid;
  for (auto a : config.lattice_a) {
    for (auto d : config.lattice_d) {
      double m = std::pow(static_cast<double>(a), static_cast<double>(d));
      if (m <= static_cast<double>(config.max_lattice_points)) grid.emplace_back(a, d);
    }
  }
  if (grid.empty()) throw Error(ErrorCode::Config, "every lattice exceeds max_points");
  report.cells.resize(grid.size());
  for_each_cell(grid.size(), config.threads, [&](std::size_t idx) {
    const auto [a, d] = grid[idx];
    const auto data = datagen::gen_lattice(a, d, config.params.precision_bits);
    // One tile spans the whole lattice, so the search space holds all m points.
    const double edge = static_cast<double>(a);
    const auto tiles = build_grid(data, edge);
    const std::size_t centre = data.size() / 2;
    const auto space = search_space(tiles, data[centre].coords, data.quantizer().encode(edge));
    const auto domain = tiles.points_in(space);
    // Neighbours strictly closer than the lattice spacing: none besides the point itself.
    const Dist2 unit2 = data.quantizer().encode_squared(1.0);
    GroverModel grover(derive_seed(config.rng_seed, idx, 0));
    QueryLedger quantum;
    quantum.set_phase("lattice");
    const auto found = grover.find_all(
        domain, [&](std::size_t i) { return i != centre && data.dist2(i, centre) < unit2; }, quantum);

    std::uint64_t classical_calls = 0;
    std::size_t classical_found = 0;
    for (std::size_t i : domain) {
      ++classical_calls;
      if (i != centre && data.dist2(i, centre) < unit2) ++classical_found;
    }
    if (classical_found != found.size()) throw Error(ErrorCode::ContractViolation, "lattice scan disagreement");

    Cell& cell = report.cells[idx];
    cell.key = {{"a", a}, {"d", d}};
    cell.ledgers.push_back(quantum.totals());
    cell.extra = {{"m", domain.size()},
                  {"classical_calls", classical_calls},
                  {"quantum_calls", quantum.totals().oracle_calls},
                  {"ledger_classical_equivalent", quantum.totals().classical_equivalent_calls}};
  });

  auto slope_of = [&](std::optional<std::size_t> only_a, const char* column) {
    std::vector<double> x, y;
    for (const auto& c : report.cells) {
      if (only_a && c.key.at("a").get<std::size_t>() != *only_a) continue;
      x.push_back(c.extra.at("m").get<double>());
      y.push_back(c.extra.at(column).get<double>());
    }
    std::set<double> distinct(x.begin(), x.end());
    return distinct.size() >= 2 ? finite_or_null(loglog_slope(x, y)) : json(nullptr);
  };
  report.summary["quantum_slope"] = slope_of(std::nullopt, "quantum_calls");
  report.summary["classical_slope"] = slope_of(std::nullopt, "classical_calls");
  json per_a = json::object();
  for (auto a : config.lattice_a) {
    per_a[std::to_string(a)] = {{"quantum_slope", slope_of(a, "quantum_calls")},
                                {"classical_slope", slope_of(a, "classical_calls")}};
  }
  report.summary["per_a"] = per_a;
  report.wall_time_s = timer.seconds();
  return report;
}

RunReport run_single(const ExperimentConfig& config, const std::string& dataset_path) {
  Timer timer;
  auto cfg = config;
  cfg.experiment = Experiment::Single;
  cfg.dataset_path = dataset_path;
  auto report = start_report(cfg);
  auto data = read_dataset_csv(dataset_path, config.params.precision_bits);
  if (data.empty()) throw Error(ErrorCode::EmptyInput, dataset_path + ": no points");
  const auto run = cluster_with(config.engine, data, config.params, derive_seed(config.rng_seed, 0, 0));

  Cell cell;
  cell.key = {{"dataset", fs::path(dataset_path).filename().string()}};
  if (data.has_labels()) {
    score_into(cell, data, run, false);
  } else {
    cell.n_clusters.push_back(run.result.n_clusters);
    cell.ledgers.push_back(run.ledger.totals());
  }
  report.cells.push_back(std::move(cell));
  report.summary = result_summary_json(run.result);
  report.summary["dataset_hash"] = file_content_hash(dataset_path);
  report.summary["points"] = data.size();
  if (config.engine == Engine::Quantum) report.summary["ledger"] = run.ledger.to_json();

  if (!config.output_dir.empty()) {
    fs::create_directories(config.output_dir);
    write_result_csv((fs::path(config.output_dir) / "result.csv").string(), data, run.result);
    report.artifacts.push_back("result.csv");
  }
  report.wall_time_s = timer.seconds();
  return report;
}

RunReport run(const ExperimentConfig& config) {
  switch (config.experiment) {
    case Experiment::Noise: return run_noise_sweep(config);
    case Experiment::Overlap: return run_overlap_sweep(config);
    case Experiment::NonCentroidal: return run_noncentroidal(config);
    case Experiment::LatticeScaling: return run_lattice_scaling(config);
    case Experiment::Single: return run_single(config, config.dataset_path);
  }
  throw Error(ErrorCode::Config, "unknown experiment");
}

namespace {

std::string csv_value(const json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) {
    std::ostringstream os;
    os << std::setprecision(17) << v.get<double>();
    return os.str();
  }
  return v.dump();
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

void write_cells_csv(const std::string& path, const RunReport& report) {
  std::vector<std::string> columns;
  std::vector<std::vector<std::pair<std::string, json>>> rows;
  for (const auto& c : report.cells) {
    std::vector<std::pair<std::string, json>> row;
    for (const auto& [k, v] : c.key.items()) row.emplace_back(k, v);
    if (!c.fh.empty()) {
      row.emplace_back("mean_FH", finite_or_null(c.mean_fh()));
      row.emplace_back("std_FH", finite_or_null(c.std_fh()));
      row.emplace_back("mean_FC", finite_or_null(c.mean_fc()));
      row.emplace_back("std_FC", finite_or_null(c.std_fc()));
      std::vector<double> nc(c.n_clusters.begin(), c.n_clusters.end());
      row.emplace_back("mean_n_clusters", finite_or_null(mean(nc)));
    }
    if (!c.ledgers.empty() && c.extra.empty()) {
      const auto s = ledger_sum(c.ledgers);
      const double reps = static_cast<double>(c.ledgers.size());
      row.emplace_back("mean_oracle_calls", static_cast<double>(s.oracle_calls) / reps);
      row.emplace_back("mean_classical_equivalent_calls", static_cast<double>(s.classical_equivalent_calls) / reps);
    }
    for (const auto& [k, v] : c.extra.items()) row.emplace_back(k, v);
    for (const auto& [k, v] : row) {
      if (std::find(columns.begin(), columns.end(), k) == columns.end()) columns.push_back(k);
    }
    rows.push_back(std::move(row));
  }
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (i) out << ',';
      for (const auto& [k, v] : row) {
        if (k == columns[i]) {
          out << csv_value(v);
          break;
        }
      }
    }
    out << '\n';
  }
}

}  // namespace

void write_report(const ExperimentConfig& config, RunReport& report) {
  if (config.output_dir.empty()) throw Error(ErrorCode::Config, "no output directory");
  const fs::path dir(config.output_dir);
  fs::create_directories(dir);
  for (const char* name : {"report.json", "cells.csv"}) {
    if (std::find(report.artifacts.begin(), report.artifacts.end(), name) == report.artifacts.end()) {
      report.artifacts.push_back(name);
    }
  }
  const auto payload = report.payload();
  write_json((dir / "report.json").string(), payload);
  write_cells_csv((dir / "cells.csv").string(), report);

  json manifest = {{"experiment", to_string(config.experiment)},
                   {"engine", to_string(config.engine)},
                   {"seed", config.rng_seed},
                   {"params", payload.at("config").at("params")},
                   {"artifacts", report.artifacts},
                   {"report_hash", file_content_hash((dir / "report.json").string())},
                   {"wall_time_s", report.wall_time_s},
                   {"created_utc", utc_timestamp()}};
  if (!config.dataset_path.empty()) {
    manifest["dataset"] = config.dataset_path;
    manifest["dataset_hash"] = file_content_hash(config.dataset_path);
  }
  write_json((dir / "manifest.json").string(), manifest);
}

}  // namespace qlue::bench
