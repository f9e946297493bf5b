#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qlue {

/// Squared distances between quantized coordinates. 128 bits so that
/// squared differences of 2^40-bounded raw values never overflow.
__extension__ typedef __int128 Dist2;

inline constexpr Dist2 kInfDist2 = static_cast<Dist2>(~(static_cast<unsigned __int128>(1) << 127));

/// Converts between real coordinates and signed fixed-point integers with
/// `frac_bits` fractional bits (resolution 2^-frac_bits).
class Quantizer {
 public:
  explicit Quantizer(int frac_bits = 16);

  int frac_bits() const noexcept { return frac_bits_; }
  double scale() const noexcept { return scale_; }

  /// Rounds to nearest; throws InvalidData for non-finite or out-of-range input.
  std::int64_t encode(double value) const;
  double decode(std::int64_t raw) const noexcept { return static_cast<double>(raw) / scale_; }

  /// Distance threshold in raw units, squared.
  Dist2 encode_squared(double length) const;
  double decode_distance(Dist2 dist2) const noexcept;

  /// Largest magnitude accepted by encode(), in raw units.
  static constexpr std::int64_t kMaxRaw = std::int64_t{1} << 40;

 private:
  int frac_bits_;
  double scale_;
};

enum class Role { Unassigned, Seed, Outlier, Follower };

const char* to_string(Role role) noexcept;

struct Point {
  std::vector<std::int64_t> coords;  // fixed point, see Dataset::quantizer()
  double energy = 0.0;

  double density = 0.0;
  std::optional<std::size_t> nearest_higher;
  Dist2 nh_dist2 = kInfDist2;
  double nh_distance = std::numeric_limits<double>::infinity();
  Role role = Role::Unassigned;
  std::optional<int> cluster_id;

  void reset_annotations() noexcept;
};

/// Clustering thresholds. Distances are in the dataset's length units.
struct Params {
  double d_c = 20.0;
  double delta = 2.0;
  double rho_c = 25.0;
  double tile_edge = 0.0;  // <= 0 selects d_c
  int precision_bits = 16;
  /// Search the whole dataset for nearest highers instead of capping at d_m.
  bool nh_global = false;

  double d_m() const noexcept { return delta * d_c; }
  double effective_tile_edge() const noexcept { return tile_edge > 0.0 ? tile_edge : d_c; }

  /// Throws InvalidInput if any threshold is non-positive or non-finite.
  void validate() const;
};

/// Points with quantized coordinates plus optional ground-truth labels.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::size_t dim, int frac_bits);

  /// Builds a dataset from real-valued rows. `labels` may be empty.
  static Dataset from_rows(const std::vector<std::vector<double>>& coords,
                           std::span<const double> energies, std::span<const int> labels,
                           int frac_bits = 16);

  void add_point(std::span<const double> coords, double energy);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }
  const Quantizer& quantizer() const noexcept { return quantizer_; }

  std::vector<Point>& points() noexcept { return points_; }
  const std::vector<Point>& points() const noexcept { return points_; }
  Point& operator[](std::size_t i) { return points_[i]; }
  const Point& operator[](std::size_t i) const { return points_[i]; }

  std::vector<int>& true_labels() noexcept { return labels_; }
  const std::vector<int>& true_labels() const noexcept { return labels_; }
  bool has_labels() const noexcept { return !labels_.empty(); }

  double coord(std::size_t i, std::size_t axis) const { return quantizer_.decode(points_[i].coords[axis]); }
  std::vector<double> energies() const;

  Dist2 dist2(std::size_t i, std::size_t j) const noexcept;

  void reset_annotations() noexcept;

 private:
  std::size_t dim_ = 0;
  Quantizer quantizer_{16};
  std::vector<Point> points_;
  std::vector<int> labels_;
};

Dist2 squared_distance(std::span<const std::int64_t> a, std::span<const std::int64_t> b) noexcept;

/// CSV with header `x1,...,xd,energy[,true_label]`.
Dataset read_dataset_csv(std::istream& in, int frac_bits = 16);
Dataset read_dataset_csv(const std::string& path, int frac_bits = 16);
void write_dataset_csv(std::ostream& out, const Dataset& data);
void write_dataset_csv(const std::string& path, const Dataset& data);

}  // namespace qlue
