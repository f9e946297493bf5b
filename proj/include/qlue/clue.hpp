#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "qlue/dataset.hpp"
#include "qlue/tile_grid.hpp"

namespace qlue {

struct ClusterResult {
  std::vector<int> labels;  // -1 = outlier or unassigned
  std::vector<std::size_t> seeds;  // seeds[c] is the root of cluster c
  std::vector<std::size_t> outliers;
  int n_clusters = 0;

  friend bool operator==(const ClusterResult&, const ClusterResult&) = default;
};

/// Squared thresholds shared by both pipelines, in raw fixed-point units.
struct Thresholds {
  Dist2 dc2 = 0;
  Dist2 dm2 = 0;
  std::int64_t dc_raw = 0;
  std::int64_t dm_raw = 0;

  static Thresholds from(const Params& params, const Quantizer& q);
};

/// Energy-weighted neighbourhood sum of a point given its neighbour set.
/// Neighbours must be sorted ascending so both pipelines add in the same order.
double density_from_neighbours(const Dataset& data, std::size_t j, std::span<const std::size_t> neighbours);

/// True if candidate (dist2, index) is strictly preferred over the incumbent.
inline bool nh_better(Dist2 d, std::size_t i, Dist2 best_d, std::optional<std::size_t> best) noexcept {
  if (!best) return true;
  return d < best_d || (d == best_d && i < *best);
}

namespace clue {

/// Fills Point::density for every point.
void local_density(Dataset& data, const TileGrid& grid, const Params& params);

struct NearestHigher {
  std::optional<std::size_t> index;
  Dist2 dist2 = kInfDist2;
};

/// Nearest strictly-higher-density point of j within d_m (or globally).
NearestHigher nearest_higher_scan(const Dataset& data, const TileGrid& grid, const Params& params, std::size_t j);

/// Annotates nearest_higher / nh_dist2 / nh_distance for every point.
void nearest_highers(Dataset& data, const TileGrid& grid, const Params& params);

/// Seed / outlier / follower decision for a single annotated point.
Role classify_point(const Point& p, const Params& params, const Thresholds& th);

void classify_seeds_outliers(Dataset& data, const Params& params);

/// Seeds in cluster-id order: descending density, then ascending index.
std::vector<std::size_t> ordered_seeds(const Dataset& data);

ClusterResult assign_clusters(Dataset& data, const TileGrid& grid, const Params& params);

/// Runs all four phases on a fresh grid.
ClusterResult run(Dataset& data, const Params& params);

}  // namespace clue

/// Rebuilds a ClusterResult from the annotations left on the points.
ClusterResult collect_result(const Dataset& data, const std::vector<std::size_t>& seeds);

}  // namespace qlue
