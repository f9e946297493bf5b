#include "qlue/tile_grid.hpp"

#include <algorithm>
#include <limits>

#include "qlue/error.hpp"

namespace qlue {

namespace {

constexpr std::size_t kMaxTiles = std::size_t{1} << 26;

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

TileGrid build_grid(const Dataset& data, double tile_edge) {
  if (data.empty()) throw Error(ErrorCode::EmptyInput, "cannot tile an empty dataset");
  if (!(tile_edge > 0.0) || !std::isfinite(tile_edge)) {
    throw Error(ErrorCode::InvalidInput, "tile_edge must be positive");
  }
  const std::size_t d = data.dim();
  TileGrid grid;
  grid.quantizer_ = data.quantizer();
  grid.edge_ = std::max<std::int64_t>(1, data.quantizer().encode(tile_edge));

  std::vector<std::int64_t> low(d, std::numeric_limits<std::int64_t>::max());
  std::vector<std::int64_t> high(d, std::numeric_limits<std::int64_t>::min());
  for (const auto& p : data.points()) {
    for (std::size_t k = 0; k < d; ++k) {
      low[k] = std::min(low[k], p.coords[k]);
      high[k] = std::max(high[k], p.coords[k]);
    }
  }

  grid.origin_ = low;
  grid.dims_.resize(d);
  std::size_t total = 1;
  for (std::size_t k = 0; k < d; ++k) {
    const std::int64_t extent = high[k] - low[k];
    const std::int64_t n = std::max<std::int64_t>(1, (extent + grid.edge_ - 1) / grid.edge_);
    grid.dims_[k] = static_cast<std::size_t>(n);
    if (grid.dims_[k] > kMaxTiles / total) {
      throw Error(ErrorCode::InvalidInput, "tile_edge too small for the data extent");
    }
    total *= grid.dims_[k];
  }
  grid.strides_.assign(d, 1);
  for (std::size_t k = d - 1; k > 0; --k) grid.strides_[k - 1] = grid.strides_[k] * grid.dims_[k];

  grid.buckets_.assign(total, {});
  for (std::size_t i = 0; i < data.size(); ++i) grid.buckets_[grid.tile_of(data[i].coords)].push_back(i);
  return grid;
}

std::size_t TileGrid::tile_of(std::span<const std::int64_t> coords) const {
  std::size_t linear = 0;
  for (std::size_t k = 0; k < dims_.size(); ++k) {
    std::int64_t idx = floor_div(coords[k] - origin_[k], edge_);
    idx = std::clamp<std::int64_t>(idx, 0, static_cast<std::int64_t>(dims_[k]) - 1);
    linear += static_cast<std::size_t>(idx) * strides_[k];
  }
  return linear;
}

SearchSpace TileGrid::tiles_in_box(std::span<const std::int64_t> low, std::span<const std::int64_t> high) const {
  const std::size_t d = dims_.size();
  std::vector<std::size_t> first(d), last(d);
  for (std::size_t k = 0; k < d; ++k) {
    const std::int64_t top = origin_[k] + static_cast<std::int64_t>(dims_[k]) * edge_;
    if (high[k] < origin_[k] || low[k] > top || low[k] > high[k]) return {};
    const auto max_idx = static_cast<std::int64_t>(dims_[k]) - 1;
    first[k] = static_cast<std::size_t>(std::clamp<std::int64_t>(floor_div(low[k] - origin_[k], edge_), 0, max_idx));
    last[k] = static_cast<std::size_t>(std::clamp<std::int64_t>(floor_div(high[k] - origin_[k], edge_), 0, max_idx));
  }

  SearchSpace space;
  std::vector<std::size_t> idx = first;
  for (;;) {
    std::size_t linear = 0;
    for (std::size_t k = 0; k < d; ++k) linear += idx[k] * strides_[k];
    space.tiles.push_back(linear);
    space.point_count += buckets_[linear].size();

    std::size_t axis = d;
    while (axis > 0) {
      --axis;
      if (idx[axis] < last[axis]) {
        ++idx[axis];
        break;
      }
      idx[axis] = first[axis];
      if (axis == 0) return space;
    }
  }
}

std::vector<std::size_t> TileGrid::points_in(const SearchSpace& space) const {
  std::vector<std::size_t> out;
  out.reserve(space.point_count);
  for (std::size_t t : space.tiles) out.insert(out.end(), buckets_[t].begin(), buckets_[t].end());
  return out;
}

SearchSpace search_space(const TileGrid& grid, std::span<const std::int64_t> center, std::int64_t radius) {
  if (radius <= 0) throw Error(ErrorCode::InvalidInput, "search radius must be positive");
  if (center.size() != grid.dim()) throw Error(ErrorCode::InvalidInput, "center dimension mismatch");
  std::vector<std::int64_t> low(center.begin(), center.end()), high(center.begin(), center.end());
  for (std::size_t k = 0; k < low.size(); ++k) {
    low[k] -= radius;
    high[k] += radius;
  }
  return grid.tiles_in_box(low, high);
}

SearchSpace search_space(const TileGrid& grid, std::span<const double> center, double radius) {
  std::vector<std::int64_t> raw;
  raw.reserve(center.size());
  for (double c : center) raw.push_back(grid.quantizer().encode(c));
  if (!(radius > 0.0)) throw Error(ErrorCode::InvalidInput, "search radius must be positive");
  return search_space(grid, raw, std::max<std::int64_t>(1, grid.quantizer().encode(radius)));
}

SearchSpace dynamic_search_space(const TileGrid& grid, const Dataset& data, std::span<const std::size_t> members,
                                 std::int64_t half_width) {
  if (members.empty()) throw Error(ErrorCode::EmptyInput, "dynamic search space needs at least one member");
  const std::size_t d = grid.dim();
  std::vector<std::int64_t> low(d, std::numeric_limits<std::int64_t>::max());
  std::vector<std::int64_t> high(d, std::numeric_limits<std::int64_t>::min());
  for (std::size_t m : members) {
    if (m >= data.size()) throw Error(ErrorCode::IndexOutOfRange, "member index " + std::to_string(m));
    const auto& c = data[m].coords;
    for (std::size_t k = 0; k < d; ++k) {
      low[k] = std::min(low[k], c[k] - half_width);
      high[k] = std::max(high[k], c[k] + half_width);
    }
  }
  return grid.tiles_in_box(low, high);
}

SearchSpace dynamic_search_space(const TileGrid& grid, const Dataset& data, std::span<const std::size_t> members,
                                 double half_width) {
  return dynamic_search_space(grid, data, members, grid.quantizer().encode(half_width));
}

}  // namespace qlue
