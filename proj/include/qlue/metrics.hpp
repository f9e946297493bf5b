#pragma once

#include <span>
#include <vector>

namespace qlue::metrics {

/// How label -1 (noise / unassigned) enters the contingency table.
enum class NoiseMode {
  SharedClass,  // all -1 points on one side form a single class
  Singletons,   // every -1 point is its own class
};

/// Energy-weighted contingency table: rows are predicted classes, columns true classes.
struct ContingencyTable {
  std::vector<std::vector<double>> joint;  // E_ab
  std::vector<double> predicted;           // E_a
  std::vector<double> truth;               // E_b
  double total = 0.0;                      // E
};

/// Maps arbitrary labels onto dense class ids 0..k-1 per `mode`.
std::vector<int> noise_handling(std::span<const int> labels, NoiseMode mode = NoiseMode::SharedClass);

ContingencyTable contingency(std::span<const int> predicted, std::span<const int> truth,
                             std::span<const double> energies, NoiseMode mode = NoiseMode::SharedClass);

struct Scores {
  double homogeneity = 1.0;   // F_H = I / H(truth)
  double completeness = 1.0;  // F_C = I / H(predicted)
};

/// Entropy in bits of weights w / total, with 0 log 0 = 0.
double entropy_bits(std::span<const double> weights, double total);

/// Energy-aware homogeneity and completeness. A zero-entropy denominator scores 1.
Scores scores(std::span<const int> predicted, std::span<const int> truth, std::span<const double> energies,
              NoiseMode mode = NoiseMode::SharedClass);

/// Same with every energy set to 1.
Scores unit_energy_scores(std::span<const int> predicted, std::span<const int> truth,
                          NoiseMode mode = NoiseMode::SharedClass);

}  // namespace qlue::metrics
