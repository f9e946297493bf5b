#include "qlue/clue.hpp"

#include <algorithm>
#include <deque>

#include "qlue/error.hpp"

namespace qlue {

Thresholds Thresholds::from(const Params& params, const Quantizer& q) {
  Thresholds th;
  th.dc_raw = std::max<std::int64_t>(1, q.encode(params.d_c));
  th.dm_raw = std::max<std::int64_t>(1, q.encode(params.d_m()));
  th.dc2 = static_cast<Dist2>(th.dc_raw) * th.dc_raw;
  th.dm2 = static_cast<Dist2>(th.dm_raw) * th.dm_raw;
  return th;
}

double density_from_neighbours(const Dataset& data, std::size_t j, std::span<const std::size_t> neighbours) {
  double sum = 0.0;
  for (std::size_t i : neighbours) sum += data[i].energy;
  return data[j].energy + 0.5 * sum;
}

ClusterResult collect_result(const Dataset& data, const std::vector<std::size_t>& seeds) {
  ClusterResult r;
  r.labels.assign(data.size(), -1);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto& p = data[i];
    if (p.cluster_id) r.labels[i] = *p.cluster_id;
    if (p.role == Role::Outlier) r.outliers.push_back(i);
  }
  r.seeds = seeds;
  r.n_clusters = static_cast<int>(seeds.size());
  return r;
}

namespace clue {

namespace {

void check_ready(const Dataset& data, const Params& params) {
  params.validate();
  if (data.empty()) throw Error(ErrorCode::EmptyInput, "dataset has no points");
  if (data.quantizer().frac_bits() != params.precision_bits) {
    throw Error(ErrorCode::InvalidInput, "dataset precision does not match params.precision_bits");
  }
}

}  // namespace

void local_density(Dataset& data, const TileGrid& grid, const Params& params) {
  check_ready(data, params);
  const auto th = Thresholds::from(params, data.quantizer());
  std::vector<std::size_t> neighbours;
  for (std::size_t j = 0; j < data.size(); ++j) {
    const auto space = search_space(grid, data[j].coords, th.dc_raw);
    neighbours.clear();
    for (std::size_t t : space.tiles) {
      for (std::size_t i : grid.bucket(t)) {
        if (i != j && data.dist2(i, j) < th.dc2) neighbours.push_back(i);
      }
    }
    std::sort(neighbours.begin(), neighbours.end());
    data[j].density = density_from_neighbours(data, j, neighbours);
  }
}

NearestHigher nearest_higher_scan(const Dataset& data, const TileGrid& grid, const Params& params, std::size_t j) {
  const auto th = Thresholds::from(params, data.quantizer());
  const double rho = data[j].density;
  NearestHigher best;
  auto consider = [&](std::size_t i) {
    if (data[i].density <= rho) return;
    const Dist2 d = data.dist2(i, j);
    if (!params.nh_global && d > th.dm2) return;
    if (nh_better(d, i, best.dist2, best.index)) {
      best.index = i;
      best.dist2 = d;
    }
  };
  if (params.nh_global) {
    for (std::size_t i = 0; i < data.size(); ++i) consider(i);
  } else {
    const auto space = search_space(grid, data[j].coords, th.dm_raw);
    for (std::size_t t : space.tiles) {
      for (std::size_t i : grid.bucket(t)) consider(i);
    }
  }
  return best;
}

void nearest_highers(Dataset& data, const TileGrid& grid, const Params& params) {
  check_ready(data, params);
  for (std::size_t j = 0; j < data.size(); ++j) {
    const auto nh = nearest_higher_scan(data, grid, params, j);
    auto& p = data[j];
    p.nearest_higher = nh.index;
    p.nh_dist2 = nh.dist2;
    p.nh_distance = data.quantizer().decode_distance(nh.dist2);
  }
}

Role classify_point(const Point& p, const Params& params, const Thresholds& th) {
  if (p.nh_dist2 > th.dc2 && p.density > params.rho_c) return Role::Seed;
  if (p.nh_dist2 > th.dm2 && p.density < params.rho_c) return Role::Outlier;
  return Role::Follower;
}

void classify_seeds_outliers(Dataset& data, const Params& params) {
  params.validate();
  const auto th = Thresholds::from(params, data.quantizer());
  for (auto& p : data.points()) {
    p.role = classify_point(p, params, th);
    p.cluster_id.reset();
  }
}

std::vector<std::size_t> ordered_seeds(const Dataset& data) {
  std::vector<std::size_t> seeds;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data[i].role == Role::Seed) seeds.push_back(i);
  }
  std::sort(seeds.begin(), seeds.end(), [&](std::size_t a, std::size_t b) {
    if (data[a].density != data[b].density) return data[a].density > data[b].density;
    return a < b;
  });
  return seeds;
}

ClusterResult assign_clusters(Dataset& data, const TileGrid& /*grid*/, const Params& /*params*/) {
  std::vector<std::vector<std::size_t>> followers(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto& p = data[i];
    if (p.role == Role::Follower && p.nearest_higher) followers[*p.nearest_higher].push_back(i);
  }

  const auto seeds = ordered_seeds(data);
  for (auto& p : data.points()) p.cluster_id.reset();
  for (std::size_t c = 0; c < seeds.size(); ++c) data[seeds[c]].cluster_id = static_cast<int>(c);

  std::deque<std::size_t> frontier;
  for (std::size_t c = 0; c < seeds.size(); ++c) {
    frontier.assign(1, seeds[c]);
    while (!frontier.empty()) {
      const std::size_t cur = frontier.front();
      frontier.pop_front();
      for (std::size_t f : followers[cur]) {
        if (data[f].cluster_id) continue;
        data[f].cluster_id = static_cast<int>(c);
        frontier.push_back(f);
      }
    }
  }
  return collect_result(data, seeds);
}

ClusterResult run(Dataset& data, const Params& params) {
  check_ready(data, params);
  data.reset_annotations();
  const auto grid = build_grid(data, params.effective_tile_edge());
  local_density(data, grid, params);
  nearest_highers(data, grid, params);
  classify_seeds_outliers(data, params);
  return assign_clusters(data, grid, params);
}

}  // namespace clue
}  // namespace qlue
