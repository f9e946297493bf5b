#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qlue/dataset.hpp"

namespace qlue {

/// Tiles whose union covers a query region, plus how many points they hold.
struct SearchSpace {
  std::vector<std::size_t> tiles;  // ascending linear tile indices
  std::size_t point_count = 0;

  bool empty() const noexcept { return tiles.empty(); }
};

/// Uniform square tiling of the dataset's bounding box. Each axis is split
/// into half-open intervals [low, low + edge); the topmost boundary is closed.
class TileGrid {
 public:
  TileGrid() = default;

  std::size_t dim() const noexcept { return dims_.size(); }
  const std::vector<std::int64_t>& origin() const noexcept { return origin_; }
  std::int64_t tile_edge_raw() const noexcept { return edge_; }
  const std::vector<std::size_t>& dims() const noexcept { return dims_; }
  std::size_t tile_count() const noexcept { return buckets_.size(); }
  const Quantizer& quantizer() const noexcept { return quantizer_; }

  const std::vector<std::size_t>& bucket(std::size_t tile) const { return buckets_.at(tile); }

  /// Linear index of the tile containing `coords`, clamped onto the grid.
  std::size_t tile_of(std::span<const std::int64_t> coords) const;

  /// Tiles intersecting the closed box [low, high] (raw units), clipped to the grid.
  SearchSpace tiles_in_box(std::span<const std::int64_t> low, std::span<const std::int64_t> high) const;

  /// Point indices of every tile in `space`, in tile order.
  std::vector<std::size_t> points_in(const SearchSpace& space) const;

  friend TileGrid build_grid(const Dataset& data, double tile_edge);

 private:
  Quantizer quantizer_{16};
  std::vector<std::int64_t> origin_;
  std::int64_t edge_ = 1;
  std::vector<std::size_t> dims_;
  std::vector<std::size_t> strides_;
  std::vector<std::vector<std::size_t>> buckets_;
};

/// Buckets every point of `data`; throws EmptyInput / InvalidInput.
TileGrid build_grid(const Dataset& data, double tile_edge);

/// Tiles meeting the axis-aligned square of half-width `radius` around `center`.
SearchSpace search_space(const TileGrid& grid, std::span<const std::int64_t> center, std::int64_t radius);
SearchSpace search_space(const TileGrid& grid, std::span<const double> center, double radius);

/// Tiles covered by the bounding box of the 2*half_width windows around each member.
SearchSpace dynamic_search_space(const TileGrid& grid, const Dataset& data, std::span<const std::size_t> members,
                                 std::int64_t half_width);
SearchSpace dynamic_search_space(const TileGrid& grid, const Dataset& data, std::span<const std::size_t> members,
                                 double half_width);

}  // namespace qlue
