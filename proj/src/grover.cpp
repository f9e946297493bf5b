#include "qlue/grover.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qlue/error.hpp"

namespace qlue {

QueryLedger::Counters& QueryLedger::Counters::operator+=(const Counters& o) noexcept {
  oracle_calls += o.oracle_calls;
  diffusion_calls += o.diffusion_calls;
  classical_equivalent_calls += o.classical_equivalent_calls;
  invocations += o.invocations;
  return *this;
}

void QueryLedger::charge_grover(std::uint64_t iterations) {
  Counters c;
  c.oracle_calls = iterations;
  c.diffusion_calls = iterations;
  c.invocations = 1;
  totals_ += c;
  phases_[phase_] += c;
}

void QueryLedger::charge_classical(std::uint64_t calls) {
  Counters c;
  c.classical_equivalent_calls = calls;
  totals_ += c;
  phases_[phase_] += c;
}

void QueryLedger::merge(const QueryLedger& other) {
  totals_ += other.totals_;
  for (const auto& [name, c] : other.phases_) phases_[name] += c;
}

QueryLedger::Counters QueryLedger::phase_counters(const std::string& phase) const {
  auto it = phases_.find(phase);
  return it == phases_.end() ? Counters{} : it->second;
}

nlohmann::json QueryLedger::to_json() const {
  auto counters = [](const Counters& c) {
    return nlohmann::json{{"oracle_calls", c.oracle_calls},
                          {"diffusion_calls", c.diffusion_calls},
                          {"classical_equivalent_calls", c.classical_equivalent_calls},
                          {"invocations", c.invocations}};
  };
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [name, c] : phases_) out[name] = counters(c);
  out["total"] = counters(totals_);
  return out;
}

std::uint64_t grover_iterations(std::size_t m, std::size_t k) {
  const double ratio = k == 0 ? static_cast<double>(m) : static_cast<double>(m) / static_cast<double>(k);
  return static_cast<std::uint64_t>(std::ceil(std::numbers::pi / 4.0 * std::sqrt(ratio)));
}

std::size_t GroverModel::pick(std::size_t n) {
  std::uniform_int_distribution<std::size_t> dist(0, n - 1);
  return dist(rng_);
}

namespace {

struct Run {
  std::optional<std::size_t> position;  // into the domain
  std::uint64_t queries = 0;
  std::size_t marked = 0;
};

}  // namespace

GroverOutcome GroverModel::find_one(std::span<const std::size_t> domain, const Predicate& marked,
                                    QueryLedger& ledger) {
  if (domain.empty()) throw Error(ErrorCode::EmptyDomain, "Grover search over an empty domain");
  std::vector<std::size_t> hits;
  for (std::size_t i : domain) {
    if (marked(i)) hits.push_back(i);
  }
  GroverOutcome out;
  out.marked_count_at_call = hits.size();
  out.queries_charged = grover_iterations(domain.size(), hits.size());
  if (!hits.empty()) out.found = hits[pick(hits.size())];
  ledger.charge_grover(out.queries_charged);
  ledger.charge_classical(domain.size());
  return out;
}

std::vector<std::size_t> GroverModel::find_all(std::span<const std::size_t> domain, const Predicate& marked,
                                               QueryLedger& ledger) {
  if (domain.empty()) throw Error(ErrorCode::EmptyDomain, "Grover search over an empty domain");
  // The marked set is fixed for the whole loop, so it is evaluated once;
  // each simulated run then draws from what has not been removed yet.
  std::vector<std::size_t> pending;
  for (std::size_t i : domain) {
    if (marked(i)) pending.push_back(i);
  }
  std::vector<std::size_t> found;
  found.reserve(pending.size());
  std::size_t remaining = domain.size();
  while (!pending.empty()) {
    ledger.charge_grover(grover_iterations(remaining, pending.size()));
    const std::size_t slot = pick(pending.size());
    found.push_back(pending[slot]);
    pending[slot] = pending.back();
    pending.pop_back();
    --remaining;
  }
  // Terminating run: measures an unmarked index (or nothing, once the domain is exhausted).
  ledger.charge_grover(grover_iterations(std::max<std::size_t>(remaining, 1), 0));
  ledger.charge_classical(domain.size());
  return found;
}

GebsResult GroverModel::gebs_nearest_higher(const Dataset& data, std::span<const std::size_t> space_points,
                                            std::size_t j, Dist2 max_dist2, QueryLedger& ledger) {
  GebsResult res;
  if (space_points.empty()) return res;
  ledger.charge_classical(space_points.size());

  std::vector<std::size_t> domain(space_points.begin(), space_points.end());
  const double rho = data[j].density;
  Dist2 low = 0;
  Dist2 high = max_dist2;
  Dist2 high_before_halving = max_dist2;
  enum class Last { Start, Found, Widened } last = Last::Start;

  std::vector<std::size_t> hits;
  for (;;) {
    if (low > high) break;  // window collapsed below the fixed-point resolution
    hits.clear();
    for (std::size_t pos = 0; pos < domain.size(); ++pos) {
      const std::size_t i = domain[pos];
      if (data[i].density <= rho) continue;
      const Dist2 d = data.dist2(i, j);
      if (d < low || d > high) continue;
      if (!nh_better(d, i, res.dist2, res.index)) continue;
      hits.push_back(pos);
    }
    const auto iters = grover_iterations(domain.size(), hits.size());
    ledger.charge_grover(iters);
    res.queries += iters;
    ++res.runs;

    if (!hits.empty()) {
      // Y: new candidate; look for something closer in the lower half.
      const std::size_t pos = hits[pick(hits.size())];
      const std::size_t i = domain[pos];
      res.index = i;
      res.dist2 = data.dist2(i, j);
      ++res.candidates;
      domain[pos] = domain.back();
      domain.pop_back();
      high_before_halving = high;
      high = (res.dist2 + low) / 2;
      last = Last::Found;
      if (domain.empty()) break;
    } else if (last == Last::Found) {
      // B: the lower half is empty; search the band above it.
      low = high + 1;
      high = high_before_halving;
      last = Last::Widened;
    } else {
      // A: nothing left that beats the candidate.
      break;
    }
  }
  return res;
}

GebsResult GroverModel::gebs_nearest_higher(const Dataset& data, const TileGrid& grid, std::size_t j,
                                            const Params& params, QueryLedger& ledger) {
  if (params.nh_global) {
    std::vector<std::size_t> all(data.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return gebs_nearest_higher(data, all, j, kInfDist2, ledger);
  }
  const auto th = Thresholds::from(params, data.quantizer());
  const auto points = grid.points_in(search_space(grid, data[j].coords, th.dm_raw));
  return gebs_nearest_higher(data, points, j, th.dm2, ledger);
}

}  // namespace qlue
