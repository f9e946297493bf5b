#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <utility>
#include <optional>
#include <random>
#include <vector>

#include "qlue/clue.hpp"
#include "qlue/dataset.hpp"

namespace qtest {

using qlue::Dataset;
using qlue::Dist2;
using qlue::Params;

// Mixture of a few blobs plus uniform background, so every role shows up.
inline Dataset random_dataset(std::mt19937_64& rng, std::size_t n, std::size_t dim, double extent = 200.0,
                              int frac_bits = 16) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> nblobs(1, 5);
  const int k = nblobs(rng);
  std::vector<std::vector<double>> centres(k, std::vector<double>(dim));
  std::vector<double> widths(k);
  for (int c = 0; c < k; ++c) {
    for (auto& x : centres[c]) x = extent * unit(rng);
    widths[c] = 3.0 + 15.0 * unit(rng);
  }
  Dataset data(dim, frac_bits);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> p(dim);
  for (std::size_t i = 0; i < n; ++i) {
    const bool background = unit(rng) < 0.25;
    const int c = static_cast<int>(unit(rng) * k) % k;
    for (std::size_t a = 0; a < dim; ++a) {
      p[a] = background ? extent * unit(rng) : centres[c][a] + widths[c] * gauss(rng);
    }
    // Coarse energies make exact density ties likely.
    const double e = background ? 0.5 * std::floor(4.0 * unit(rng)) : 1.0 + std::floor(10.0 * unit(rng));
    data.add_point(p, e);
  }
  return data;
}

inline Params random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Params p;
  p.d_c = 4.0 + 20.0 * unit(rng);
  p.delta = 1.0 + 2.0 * unit(rng);
  p.rho_c = 2.0 + 30.0 * unit(rng);
  if (unit(rng) < 0.3) p.tile_edge = p.d_c * (0.5 + unit(rng));
  return p;
}

// O(n^2) density in index order.
inline std::vector<double> all_pairs_density(const Dataset& data, const Params& params) {
  const auto th = qlue::Thresholds::from(params, data.quantizer());
  std::vector<double> rho(data.size());
  for (std::size_t j = 0; j < data.size(); ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (i != j && data.dist2(i, j) < th.dc2) sum += data[i].energy;
    }
    rho[j] = data[j].energy + 0.5 * sum;
  }
  return rho;
}

struct Nh {
  std::optional<std::size_t> index;
  Dist2 dist2 = qlue::kInfDist2;
};

// Linear scan for the closest strictly denser point, ties to the lower index.
inline Nh linear_scan_nh(const Dataset& data, std::size_t j, Dist2 max_dist2) {
  Nh best;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (!(data[i].density > data[j].density)) continue;
    const Dist2 d = data.dist2(i, j);
    if (d > max_dist2) continue;
    if (!best.index || d < best.dist2) {
      best.index = i;
      best.dist2 = d;
    }
  }
  return best;
}

// Textbook count-based homogeneity/completeness with natural logs.
inline std::pair<double, double> standard_scores(const std::vector<int>& pred, const std::vector<int>& truth) {
  const double n = static_cast<double>(pred.size());
  std::map<int, double> nc, nk;
  std::map<std::pair<int, int>, double> nck;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    nc[truth[i]] += 1;
    nk[pred[i]] += 1;
    nck[{truth[i], pred[i]}] += 1;
  }
  double hc = 0, hk = 0, hc_k = 0, hk_c = 0;
  for (auto [c, v] : nc) hc -= v / n * std::log(v / n);
  for (auto [k, v] : nk) hk -= v / n * std::log(v / n);
  for (auto [ck, v] : nck) {
    hc_k -= v / n * std::log(v / nk[ck.second]);
    hk_c -= v / n * std::log(v / nc[ck.first]);
  }
  const double h = hc == 0 ? 1.0 : 1.0 - hc_k / hc;
  const double c = hk == 0 ? 1.0 : 1.0 - hk_c / hk;
  return {h, c};
}

}  // namespace qtest
