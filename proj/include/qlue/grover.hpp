#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "qlue/clue.hpp"
#include "qlue/dataset.hpp"
#include "qlue/tile_grid.hpp"

namespace qlue {

/// Oracle-query accounting, split by pipeline phase.
class QueryLedger {
 public:
  struct Counters {
    std::uint64_t oracle_calls = 0;
    std::uint64_t diffusion_calls = 0;
    std::uint64_t classical_equivalent_calls = 0;
    std::uint64_t invocations = 0;

    Counters& operator+=(const Counters& o) noexcept;
    friend bool operator==(const Counters&, const Counters&) = default;
  };

  /// Subsequent charges are booked under `phase`.
  void set_phase(std::string phase) { phase_ = std::move(phase); }
  const std::string& phase() const noexcept { return phase_; }

  /// One Grover invocation running `iterations` oracle+diffusion rounds.
  void charge_grover(std::uint64_t iterations);
  void charge_classical(std::uint64_t calls);

  void merge(const QueryLedger& other);

  const Counters& totals() const noexcept { return totals_; }
  const std::map<std::string, Counters>& phases() const noexcept { return phases_; }
  Counters phase_counters(const std::string& phase) const;

  nlohmann::json to_json() const;

 private:
  std::string phase_ = "default";
  Counters totals_;
  std::map<std::string, Counters> phases_;
};

/// ceil((pi/4) * sqrt(m / k)); the k = 0 case charges a full-width run.
std::uint64_t grover_iterations(std::size_t m, std::size_t k);

struct GroverOutcome {
  std::optional<std::size_t> found;
  std::uint64_t queries_charged = 0;
  std::size_t marked_count_at_call = 0;
};

using Predicate = std::function<bool(std::size_t)>;

/// Result of a Grover-enhanced binary search for a nearest higher.
struct GebsResult {
  std::optional<std::size_t> index;
  Dist2 dist2 = kInfDist2;
  std::size_t candidates = 0;  // successful (Y-branch) measurements
  std::size_t runs = 0;        // Grover invocations
  std::uint64_t queries = 0;
};

/// Idealized quantum search: a run with k >= 1 marked items always returns
/// one of them, chosen uniformly; costs follow the ceil((pi/4)sqrt(m/k)) law.
class GroverModel {
 public:
  explicit GroverModel(std::uint64_t seed = 0) : rng_(seed) {}

  GroverOutcome find_one(std::span<const std::size_t> domain, const Predicate& marked, QueryLedger& ledger);

  /// Repeated find_one with removal until a run comes back empty.
  std::vector<std::size_t> find_all(std::span<const std::size_t> domain, const Predicate& marked,
                                    QueryLedger& ledger);

  /// Nearest strictly-higher-density point of `j` among `space_points`, found
  /// by binary search over distance windows. `max_dist2` bounds the window
  /// (inclusive); pass kInfDist2 for an unbounded search.
  GebsResult gebs_nearest_higher(const Dataset& data, std::span<const std::size_t> space_points, std::size_t j,
                                 Dist2 max_dist2, QueryLedger& ledger);

  /// Convenience overload that derives the space from the grid and params.
  GebsResult gebs_nearest_higher(const Dataset& data, const TileGrid& grid, std::size_t j, const Params& params,
                                 QueryLedger& ledger);

  std::mt19937_64& rng() noexcept { return rng_; }

 private:
  std::size_t pick(std::size_t n);

  std::mt19937_64 rng_;
};

}  // namespace qlue
