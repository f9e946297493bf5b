#include "qlue/qlue.hpp"

#include <algorithm>
#include <cmath>

#include "qlue/error.hpp"

namespace qlue::pipeline {

namespace {

void check_ready(const Dataset& data, const Params& params) {
  params.validate();
  if (data.empty()) throw Error(ErrorCode::EmptyInput, "dataset has no points");
  if (data.quantizer().frac_bits() != params.precision_bits) {
    throw Error(ErrorCode::InvalidInput, "dataset precision does not match params.precision_bits");
  }
}

std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = i;
  return out;
}

// Followers lie within their nearest higher's distance of a cluster member.
std::int64_t dss_half_width(const Dataset& data, const Params& params, const Thresholds& th) {
  if (!params.nh_global) return th.dm_raw;
  Dist2 widest = 0;
  for (const auto& p : data.points()) {
    if (p.nearest_higher) widest = std::max(widest, p.nh_dist2);
  }
  auto root = static_cast<std::int64_t>(std::sqrt(static_cast<long double>(widest)));
  while (static_cast<Dist2>(root) * root < widest) ++root;
  return std::max(th.dm_raw, root);
}

}  // namespace

void q_local_density(Dataset& data, const TileGrid& grid, const Params& params, GroverModel& grover,
                     QueryLedger& ledger) {
  check_ready(data, params);
  ledger.set_phase(kPhaseDensity);
  const auto th = Thresholds::from(params, data.quantizer());
  for (std::size_t j = 0; j < data.size(); ++j) {
    const auto domain = grid.points_in(search_space(grid, data[j].coords, th.dc_raw));
    auto found = grover.find_all(
        domain, [&](std::size_t i) { return i != j && data.dist2(i, j) < th.dc2; }, ledger);
    std::sort(found.begin(), found.end());
    data[j].density = density_from_neighbours(data, j, found);
  }
}

void q_nearest_highers(Dataset& data, const TileGrid& grid, const Params& params, GroverModel& grover,
                       QueryLedger& ledger) {
  check_ready(data, params);
  ledger.set_phase(kPhaseNearestHigher);
  for (std::size_t j = 0; j < data.size(); ++j) {
    const auto nh = grover.gebs_nearest_higher(data, grid, j, params, ledger);
    auto& p = data[j];
    p.nearest_higher = nh.index;
    p.nh_dist2 = nh.dist2;
    p.nh_distance = data.quantizer().decode_distance(nh.dist2);
  }
}

void q_classify(Dataset& data, const Params& params, GroverModel& grover, QueryLedger& ledger) {
  check_ready(data, params);
  ledger.set_phase(kPhaseClassify);
  const auto th = Thresholds::from(params, data.quantizer());
  const auto domain = all_indices(data.size());
  const auto seeds = grover.find_all(
      domain,
      [&](std::size_t i) { return data[i].nh_dist2 > th.dc2 && data[i].density > params.rho_c; },
      ledger);
  const auto outliers = grover.find_all(
      domain,
      [&](std::size_t i) { return data[i].nh_dist2 > th.dm2 && data[i].density < params.rho_c; },
      ledger);
  for (auto& p : data.points()) {
    p.role = Role::Follower;
    p.cluster_id.reset();
  }
  for (std::size_t i : seeds) data[i].role = Role::Seed;
  for (std::size_t i : outliers) data[i].role = Role::Outlier;
}

ClusterResult q_assign_clusters(Dataset& data, const TileGrid& grid, const Params& params, GroverModel& grover,
                                QueryLedger& ledger, const DssObserver& observer) {
  check_ready(data, params);
  ledger.set_phase(kPhaseAssign);
  const auto th = Thresholds::from(params, data.quantizer());
  const std::int64_t half_width = dss_half_width(data, params, th);

  const auto seeds = clue::ordered_seeds(data);
  for (auto& p : data.points()) p.cluster_id.reset();
  // Seeds carry their cluster number from classification on.
  for (std::size_t c = 0; c < seeds.size(); ++c) data[seeds[c]].cluster_id = static_cast<int>(c);

  std::vector<char> in_cluster(data.size(), 0);
  std::vector<std::size_t> members;
  std::vector<std::size_t> domain;
  for (std::size_t c = 0; c < seeds.size(); ++c) {
    members.assign(1, seeds[c]);
    in_cluster[seeds[c]] = 1;
    for (;;) {
      const auto dss = dynamic_search_space(grid, data, members, half_width);
      if (observer) observer(seeds[c], dss);
      domain.clear();
      for (std::size_t t : dss.tiles) {
        for (std::size_t i : grid.bucket(t)) {
          if (!data[i].cluster_id && data[i].role != Role::Outlier) domain.push_back(i);
        }
      }
      if (domain.empty()) break;
      const auto found = grover.find_all(
          domain,
          [&](std::size_t i) { return data[i].nearest_higher && in_cluster[*data[i].nearest_higher] != 0; },
          ledger);
      if (found.empty()) break;
      for (std::size_t i : found) {
        data[i].cluster_id = static_cast<int>(c);
        in_cluster[i] = 1;
        members.push_back(i);
      }
    }
    for (std::size_t m : members) in_cluster[m] = 0;
  }
  return collect_result(data, seeds);
}

PipelineRun run(Dataset& data, const Params& params, std::uint64_t rng_seed) {
  check_ready(data, params);
  data.reset_annotations();
  PipelineRun out;
  out.params = params;
  out.rng_seed = rng_seed;
  GroverModel grover(rng_seed);
  const auto grid = build_grid(data, params.effective_tile_edge());
  q_local_density(data, grid, params, grover, out.ledger);
  q_nearest_highers(data, grid, params, grover, out.ledger);
  q_classify(data, params, grover, out.ledger);
  out.result = q_assign_clusters(data, grid, params, grover, out.ledger);
  return out;
}

}  // namespace qlue::pipeline
