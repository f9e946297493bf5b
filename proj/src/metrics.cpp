#include "qlue/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "qlue/error.hpp"

namespace qlue::metrics {

std::vector<int> noise_handling(std::span<const int> labels, NoiseMode mode) {
  std::map<int, int> dense;
  for (int l : labels) {
    if (l != -1 || mode == NoiseMode::SharedClass) dense.emplace(l, 0);
  }
  int next = 0;
  for (auto& [label, id] : dense) id = next++;
  std::vector<int> out;
  out.reserve(labels.size());
  for (int l : labels) {
    if (l == -1 && mode == NoiseMode::Singletons) {
      out.push_back(next++);
    } else {
      out.push_back(dense.at(l));
    }
  }
  return out;
}

ContingencyTable contingency(std::span<const int> predicted, std::span<const int> truth,
                             std::span<const double> energies, NoiseMode mode) {
  if (predicted.size() != truth.size() || predicted.size() != energies.size()) {
    throw Error(ErrorCode::InvalidInput, "label and energy vectors differ in length");
  }
  const auto a = noise_handling(predicted, mode);
  const auto b = noise_handling(truth, mode);
  const int rows = a.empty() ? 0 : *std::max_element(a.begin(), a.end()) + 1;
  const int cols = b.empty() ? 0 : *std::max_element(b.begin(), b.end()) + 1;

  ContingencyTable t;
  t.joint.assign(rows, std::vector<double>(cols, 0.0));
  t.predicted.assign(rows, 0.0);
  t.truth.assign(cols, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double e = energies[i];
    if (!(e >= 0.0) || !std::isfinite(e)) throw Error(ErrorCode::InvalidInput, "energies must be finite and >= 0");
    t.joint[a[i]][b[i]] += e;
    t.predicted[a[i]] += e;
    t.truth[b[i]] += e;
    t.total += e;
  }
  if (!(t.total > 0.0)) throw Error(ErrorCode::InvalidInput, "total energy must be positive");
  return t;
}

double entropy_bits(std::span<const double> weights, double total) {
  double h = 0.0;
  for (double w : weights) {
    if (w > 0.0) {
      const double p = w / total;
      h -= p * std::log2(p);
    }
  }
  return h;
}

Scores scores(std::span<const int> predicted, std::span<const int> truth, std::span<const double> energies,
              NoiseMode mode) {
  const auto t = contingency(predicted, truth, energies, mode);
  const double h_pred = entropy_bits(t.predicted, t.total);
  const double h_true = entropy_bits(t.truth, t.total);
  double h_joint = 0.0;
  for (const auto& row : t.joint) h_joint += entropy_bits(row, t.total);
  const double mutual = std::max(0.0, h_pred + h_true - h_joint);

  Scores s;
  s.homogeneity = h_true > 0.0 ? std::clamp(mutual / h_true, 0.0, 1.0) : 1.0;
  s.completeness = h_pred > 0.0 ? std::clamp(mutual / h_pred, 0.0, 1.0) : 1.0;
  return s;
}

Scores unit_energy_scores(std::span<const int> predicted, std::span<const int> truth, NoiseMode mode) {
  const std::vector<double> ones(predicted.size(), 1.0);
  return scores(predicted, truth, ones, mode);
}

}  // namespace qlue::metrics
