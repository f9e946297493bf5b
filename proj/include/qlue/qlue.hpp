#pragma once

#include <cstdint>
#include <functional>

#include "qlue/clue.hpp"
#include "qlue/grover.hpp"

namespace qlue {

/// Result bundle of one quantum-model run.
struct PipelineRun {
  ClusterResult result;
  QueryLedger ledger;
  Params params;
  std::uint64_t rng_seed = 0;
};

namespace pipeline {

inline constexpr const char* kPhaseDensity = "local_density";
inline constexpr const char* kPhaseNearestHigher = "nearest_higher";
inline constexpr const char* kPhaseClassify = "classify";
inline constexpr const char* kPhaseAssign = "assign_clusters";

/// Called with each seed and the dynamic search space of every pass.
using DssObserver = std::function<void(std::size_t seed, const SearchSpace& dss)>;

void q_local_density(Dataset& data, const TileGrid& grid, const Params& params, GroverModel& grover,
                     QueryLedger& ledger);

void q_nearest_highers(Dataset& data, const TileGrid& grid, const Params& params, GroverModel& grover,
                       QueryLedger& ledger);

void q_classify(Dataset& data, const Params& params, GroverModel& grover, QueryLedger& ledger);

ClusterResult q_assign_clusters(Dataset& data, const TileGrid& grid, const Params& params, GroverModel& grover,
                                QueryLedger& ledger, const DssObserver& observer = {});

PipelineRun run(Dataset& data, const Params& params, std::uint64_t rng_seed);

}  // namespace pipeline
}  // namespace qlue
