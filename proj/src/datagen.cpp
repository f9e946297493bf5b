#include "qlue/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "qlue/error.hpp"

namespace qlue::datagen {

const char* to_string(Family f) noexcept {
  switch (f) {
    case Family::GaussianCluster: return "gaussian";
    case Family::UniformNoise: return "noise";
    case Family::TwoGaussians: return "two_gaussians";
    case Family::Moons: return "moons";
    case Family::Circles: return "circles";
    case Family::Lattice: return "lattice";
  }
  return "unknown";
}

Family family_from_string(const std::string& s) {
  for (Family f : {Family::GaussianCluster, Family::UniformNoise, Family::TwoGaussians, Family::Moons,
                   Family::Circles, Family::Lattice}) {
    if (s == to_string(f)) return f;
  }
  throw Error(ErrorCode::Config, "unknown dataset family '" + s + "'");
}

const char* to_string(EnergyProfile p) noexcept { return p == EnergyProfile::Uniform ? "uniform" : "gradient"; }

EnergyProfile profile_from_string(const std::string& s) {
  if (s == "uniform") return EnergyProfile::Uniform;
  if (s == "gradient") return EnergyProfile::Gradient;
  throw Error(ErrorCode::Config, "unknown energy profile '" + s + "'");
}

void DatasetSpec::validate() const {
  if (dim == 0) throw Error(ErrorCode::InvalidInput, "dim must be >= 1");
  if (!(sigma > 0.0)) throw Error(ErrorCode::InvalidInput, "sigma must be positive");
  if (!mu.empty() && mu.size() != dim) throw Error(ErrorCode::InvalidInput, "mu dimension mismatch");
  if (amplitude < 0.0) throw Error(ErrorCode::InvalidInput, "amplitude must be non-negative");
  if (!(noise_side > 0.0)) throw Error(ErrorCode::InvalidInput, "noise_side must be positive");
  if (r < 0.0) throw Error(ErrorCode::InvalidInput, "r must be non-negative");
  if (jitter < 0.0) throw Error(ErrorCode::InvalidInput, "jitter must be non-negative");
  if (!(scale > 0.0)) throw Error(ErrorCode::InvalidInput, "scale must be positive");
  if (!(circle_factor > 0.0 && circle_factor < 1.0)) throw Error(ErrorCode::InvalidInput, "circle_factor in (0,1)");
  if (lattice_a < 1) throw Error(ErrorCode::InvalidInput, "lattice edge a must be >= 1");
}

nlohmann::json to_json(const DatasetSpec& s) {
  return nlohmann::json{{"family", to_string(s.family)},
                        {"dim", s.dim},
                        {"sigma", s.sigma},
                        {"mu", s.mu},
                        {"n_cluster", s.n_cluster},
                        {"n_noise", s.n_noise},
                        {"amplitude", s.amplitude},
                        {"noise_side", s.noise_side},
                        {"r", s.r},
                        {"n1", s.n1},
                        {"n2", s.n2},
                        {"n_per_cluster", s.n_per_cluster},
                        {"jitter", s.jitter},
                        {"scale", s.scale},
                        {"circle_factor", s.circle_factor},
                        {"profile", to_string(s.profile)},
                        {"lattice_a", s.lattice_a},
                        {"rng_seed", s.rng_seed},
                        {"precision_bits", s.precision_bits}};
}

DatasetSpec spec_from_json(const nlohmann::json& j) {
  DatasetSpec s;
  try {
    if (j.contains("family")) s.family = family_from_string(j.at("family").get<std::string>());
    s.dim = j.value("dim", s.dim);
    s.sigma = j.value("sigma", s.sigma);
    s.mu = j.value("mu", s.mu);
    s.n_cluster = j.value("n_cluster", s.n_cluster);
    s.n_noise = j.value("n_noise", s.n_noise);
    s.amplitude = j.value("amplitude", s.amplitude);
    s.noise_side = j.value("noise_side", s.noise_side);
    s.r = j.value("r", s.r);
    s.n1 = j.value("n1", s.n1);
    s.n2 = j.value("n2", s.n2);
    s.n_per_cluster = j.value("n_per_cluster", s.n_per_cluster);
    s.jitter = j.value("jitter", s.jitter);
    s.scale = j.value("scale", s.scale);
    s.circle_factor = j.value("circle_factor", s.circle_factor);
    if (j.contains("profile")) s.profile = profile_from_string(j.at("profile").get<std::string>());
    s.lattice_a = j.value("lattice_a", s.lattice_a);
    s.rng_seed = j.value("rng_seed", s.rng_seed);
    s.precision_bits = j.value("precision_bits", s.precision_bits);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Config, e.what());
  }
  s.validate();
  return s;
}

double gaussian_pdf(std::span<const double> x, std::span<const double> mu, double sigma) {
  double r2 = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double m = mu.empty() ? 0.0 : mu[k];
    r2 += (x[k] - m) * (x[k] - m);
  }
  const double d = static_cast<double>(x.size());
  return std::exp(-0.5 * r2 / sigma) / std::pow(2.0 * std::numbers::pi * sigma, 0.5 * d);
}

namespace {

struct Builder {
  std::vector<std::vector<double>> coords;
  std::vector<double> energies;
  std::vector<int> labels;

  void add(std::vector<double> x, double e, int label) {
    coords.push_back(std::move(x));
    energies.push_back(e);
    labels.push_back(label);
  }

  Dataset finish(int precision_bits) const {
    if (coords.empty()) throw Error(ErrorCode::EmptyInput, "generator produced no points");
    return Dataset::from_rows(coords, energies, labels, precision_bits);
  }
};

void add_gaussian_blob(Builder& b, std::mt19937_64& rng, std::size_t n, std::span<const double> mu, double sigma,
                       double amplitude, int label) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double sd = std::sqrt(sigma);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> x(mu.size());
    for (std::size_t k = 0; k < mu.size(); ++k) x[k] = mu[k] + sd * normal(rng);
    const double e = amplitude * gaussian_pdf(x, mu, sigma);
    b.add(std::move(x), e, label);
  }
}

double linspace(double lo, double hi, std::size_t i, std::size_t n, bool endpoint) {
  if (n <= 1) return lo;
  const double steps = static_cast<double>(endpoint ? n - 1 : n);
  return lo + (hi - lo) * static_cast<double>(i) / steps;
}

// Uniform profile: every point of a cluster gets the cluster's mean gradient
// energy, so both profiles carry the same total energy.
void flatten_energies(Builder& b, std::size_t first, std::size_t count) {
  double sum = 0.0;
  for (std::size_t i = first; i < first + count; ++i) sum += b.energies[i];
  const double mean = count ? sum / static_cast<double>(count) : 0.0;
  for (std::size_t i = first; i < first + count; ++i) b.energies[i] = mean;
}

}  // namespace

Dataset gen_noisy_gaussian(const DatasetSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.rng_seed);
  Builder b;
  std::vector<double> mu = spec.mu.empty() ? std::vector<double>(spec.dim, 0.0) : spec.mu;
  add_gaussian_blob(b, rng, spec.n_cluster, mu, spec.sigma, spec.amplitude, 0);

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t i = 0; i < spec.n_noise; ++i) {
    std::vector<double> x(spec.dim);
    for (std::size_t k = 0; k < spec.dim; ++k) x[k] = mu[k] + spec.noise_side * (unit(rng) - 0.5);
    b.add(std::move(x), unit(rng), -1);
  }
  return b.finish(spec.precision_bits);
}

Dataset gen_two_gaussians(const DatasetSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.rng_seed);
  Builder b;
  std::vector<double> mu1(spec.dim, 0.0), mu2(spec.dim, 0.0);
  mu1[0] = spec.r / 2.0;
  mu2[0] = -spec.r / 2.0;
  add_gaussian_blob(b, rng, spec.n1, mu1, spec.sigma, spec.amplitude, 0);
  add_gaussian_blob(b, rng, spec.n2, mu2, spec.sigma, spec.amplitude, 1);
  return b.finish(spec.precision_bits);
}

Dataset gen_moons(const DatasetSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.rng_seed);
  std::normal_distribution<double> normal(0.0, spec.jitter > 0.0 ? spec.jitter : 1.0);
  auto noise = [&] { return spec.jitter > 0.0 ? normal(rng) : 0.0; };
  const std::size_t n = spec.n_per_cluster;
  Builder b;
  for (int moon = 0; moon < 2; ++moon) {
    for (std::size_t i = 0; i < n; ++i) {
      const double t = linspace(0.0, std::numbers::pi, i, n, true);
      double x = moon == 0 ? std::cos(t) : 1.0 - std::cos(t);
      double y = moon == 0 ? std::sin(t) : 1.0 - std::sin(t) - 0.5;
      x = spec.scale * (x + noise());
      y = spec.scale * (y + noise());
      const double e = moon == 0 ? std::max(0.0, y) : std::max(0.0, 60.0 - y);
      b.add({x, y}, e, moon);
    }
    if (spec.profile == EnergyProfile::Uniform) flatten_energies(b, moon * n, n);
  }
  return b.finish(spec.precision_bits);
}

Dataset gen_circles(const DatasetSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.rng_seed);
  std::normal_distribution<double> normal(0.0, spec.jitter > 0.0 ? spec.jitter : 1.0);
  auto noise = [&] { return spec.jitter > 0.0 ? normal(rng) : 0.0; };
  const std::size_t n = spec.n_per_cluster;
  Builder b;
  for (int ring = 0; ring < 2; ++ring) {
    const double radius = ring == 0 ? 1.0 : spec.circle_factor;
    for (std::size_t i = 0; i < n; ++i) {
      const double t = linspace(0.0, 2.0 * std::numbers::pi, i, n, false);
      const double x = spec.scale * (radius * std::cos(t) + noise());
      const double y = spec.scale * (radius * std::sin(t) + noise());
      const double e = ring == 0 ? std::fabs(y + 100.0) / 5.0 : std::fabs(y - 200.0) / 10.0;
      b.add({x, y}, e, ring);
    }
    if (spec.profile == EnergyProfile::Uniform) flatten_energies(b, ring * n, n);
  }
  return b.finish(spec.precision_bits);
}

Dataset gen_lattice(std::size_t a, std::size_t d, int precision_bits) {
  if (a < 1 || d < 1) throw Error(ErrorCode::InvalidInput, "lattice needs a >= 1 and d >= 1");
  std::size_t total = 1;
  for (std::size_t k = 0; k < d; ++k) {
    if (total > (std::size_t{1} << 26) / a) throw Error(ErrorCode::InvalidInput, "lattice too large");
    total *= a;
  }
  Builder b;
  std::vector<double> x(d, 0.0);
  for (std::size_t i = 0; i < total; ++i) {
    std::size_t rest = i;
    for (std::size_t k = d; k-- > 0;) {
      x[k] = static_cast<double>(rest % a);
      rest /= a;
    }
    b.add(x, 1.0, 0);
  }
  return b.finish(precision_bits);
}

Dataset generate(const DatasetSpec& spec) {
  switch (spec.family) {
    case Family::GaussianCluster: return gen_noisy_gaussian(spec);
    case Family::UniformNoise: {
      DatasetSpec s = spec;
      s.n_cluster = 0;
      return gen_noisy_gaussian(s);
    }
    case Family::TwoGaussians: return gen_two_gaussians(spec);
    case Family::Moons: return gen_moons(spec);
    case Family::Circles: return gen_circles(spec);
    case Family::Lattice: return gen_lattice(spec.lattice_a, spec.dim, spec.precision_bits);
  }
  throw Error(ErrorCode::InvalidInput, "unknown family");
}

}  // namespace qlue::datagen
