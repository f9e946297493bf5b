#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "qlue/dataset.hpp"

namespace qlue::datagen {

enum class Family { GaussianCluster, UniformNoise, TwoGaussians, Moons, Circles, Lattice };
enum class EnergyProfile { Uniform, Gradient };

const char* to_string(Family f) noexcept;
Family family_from_string(const std::string& s);
const char* to_string(EnergyProfile p) noexcept;
EnergyProfile profile_from_string(const std::string& s);

/// Parameters for every dataset family; fields a family does not use are ignored.
/// `sigma` is the variance of each coordinate (covariance sigma * I).
struct DatasetSpec {
  Family family = Family::GaussianCluster;
  std::size_t dim = 2;
  double sigma = 32.0;
  std::vector<double> mu;   // empty = origin
  std::size_t n_cluster = 750;
  std::size_t n_noise = 0;
  double amplitude = 500.0;  // A: cluster energy = A * pdf(x)
  double noise_side = 500.0;
  double r = 0.0;            // centre separation for TwoGaussians
  std::size_t n1 = 500;
  std::size_t n2 = 500;
  std::size_t n_per_cluster = 500;  // moons / circles
  double jitter = 0.05;             // in the unit frame, before scaling
  double scale = 100.0;
  double circle_factor = 0.5;
  EnergyProfile profile = EnergyProfile::Gradient;
  std::size_t lattice_a = 3;
  std::uint64_t rng_seed = 0;
  int precision_bits = 16;

  /// Throws InvalidInput for negative sizes, non-positive sigma, a < 1, ...
  void validate() const;
};

nlohmann::json to_json(const DatasetSpec& spec);
DatasetSpec spec_from_json(const nlohmann::json& j);

/// Density of N(mu, sigma * I) in `x.size()` dimensions.
double gaussian_pdf(std::span<const double> x, std::span<const double> mu, double sigma);

Dataset gen_noisy_gaussian(const DatasetSpec& spec);
Dataset gen_two_gaussians(const DatasetSpec& spec);
Dataset gen_moons(const DatasetSpec& spec);
Dataset gen_circles(const DatasetSpec& spec);
Dataset gen_lattice(std::size_t a, std::size_t d, int precision_bits = 16);

/// Dispatches on spec.family (UniformNoise = a noisy Gaussian with n_cluster = 0).
Dataset generate(const DatasetSpec& spec);

}  // namespace qlue::datagen
