#include "qlue/dataset.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "qlue/error.hpp"

namespace qlue {

Quantizer::Quantizer(int frac_bits) : frac_bits_(frac_bits) {
  if (frac_bits < 1 || frac_bits > 30) {
    throw Error(ErrorCode::InvalidInput, "precision bits must lie in [1, 30], got " + std::to_string(frac_bits));
  }
  scale_ = std::ldexp(1.0, frac_bits);
}

std::int64_t Quantizer::encode(double value) const {
  if (!std::isfinite(value)) {
    throw Error(ErrorCode::InvalidData, "non-finite coordinate");
  }
  const double scaled = std::nearbyint(value * scale_);
  if (std::fabs(scaled) > static_cast<double>(kMaxRaw)) {
    throw Error(ErrorCode::InvalidData, "coordinate out of fixed-point range: " + std::to_string(value));
  }
  return static_cast<std::int64_t>(scaled);
}

Dist2 Quantizer::encode_squared(double length) const {
  const Dist2 raw = encode(length);
  return raw * raw;
}

double Quantizer::decode_distance(Dist2 dist2) const noexcept {
  if (dist2 == kInfDist2) return std::numeric_limits<double>::infinity();
  return std::sqrt(static_cast<long double>(dist2)) / scale_;
}

const char* to_string(Role role) noexcept {
  switch (role) {
    case Role::Unassigned: return "unassigned";
    case Role::Seed: return "seed";
    case Role::Outlier: return "outlier";
    case Role::Follower: return "follower";
  }
  return "unknown";
}

void Point::reset_annotations() noexcept {
  density = 0.0;
  nearest_higher.reset();
  nh_dist2 = kInfDist2;
  nh_distance = std::numeric_limits<double>::infinity();
  role = Role::Unassigned;
  cluster_id.reset();
}

void Params::validate() const {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(d_c)) throw Error(ErrorCode::InvalidInput, "d_c must be positive");
  if (!positive(delta)) throw Error(ErrorCode::InvalidInput, "delta must be positive");
  if (!positive(rho_c)) throw Error(ErrorCode::InvalidInput, "rho_c must be positive");
  if (!(tile_edge <= 0.0 || std::isfinite(tile_edge))) throw Error(ErrorCode::InvalidInput, "tile_edge must be finite");
  if (precision_bits < 1) throw Error(ErrorCode::InvalidInput, "precision_bits must be >= 1");
}

Dataset::Dataset(std::size_t dim, int frac_bits) : dim_(dim), quantizer_(frac_bits) {
  if (dim == 0) throw Error(ErrorCode::InvalidInput, "dimension must be positive");
}

Dataset Dataset::from_rows(const std::vector<std::vector<double>>& coords, std::span<const double> energies,
                           std::span<const int> labels, int frac_bits) {
  if (coords.empty()) throw Error(ErrorCode::EmptyInput, "dataset has no points");
  if (coords.size() != energies.size()) throw Error(ErrorCode::InvalidInput, "coordinate/energy count mismatch");
  if (!labels.empty() && labels.size() != coords.size()) {
    throw Error(ErrorCode::InvalidInput, "label count mismatch");
  }
  Dataset out(coords.front().size(), frac_bits);
  out.points_.reserve(coords.size());
  for (std::size_t i = 0; i < coords.size(); ++i) out.add_point(coords[i], energies[i]);
  out.labels_.assign(labels.begin(), labels.end());
  return out;
}

void Dataset::add_point(std::span<const double> coords, double energy) {
  if (coords.size() != dim_) {
    throw Error(ErrorCode::InvalidData, "point has " + std::to_string(coords.size()) + " coordinates, expected " +
                                            std::to_string(dim_));
  }
  if (!std::isfinite(energy) || energy < 0.0) {
    throw Error(ErrorCode::InvalidData, "energy must be finite and non-negative");
  }
  Point p;
  p.coords.reserve(dim_);
  for (double c : coords) p.coords.push_back(quantizer_.encode(c));
  p.energy = energy;
  points_.push_back(std::move(p));
}

std::vector<double> Dataset::energies() const {
  std::vector<double> out;
  out.reserve(points_.size());
  for (const auto& p : points_) out.push_back(p.energy);
  return out;
}

Dist2 squared_distance(std::span<const std::int64_t> a, std::span<const std::int64_t> b) noexcept {
  Dist2 sum = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const Dist2 diff = static_cast<Dist2>(a[k]) - static_cast<Dist2>(b[k]);
    sum += diff * diff;
  }
  return sum;
}

Dist2 Dataset::dist2(std::size_t i, std::size_t j) const noexcept {
  return squared_distance(points_[i].coords, points_[j].coords);
}

void Dataset::reset_annotations() noexcept {
  for (auto& p : points_) p.reset_annotations();
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_real(const std::string& s, std::size_t line_no) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidData, "line " + std::to_string(line_no) + ": bad number '" + s + "'");
  }
}

}  // namespace

Dataset read_dataset_csv(std::istream& in, int frac_bits) {
  std::string line;
  if (!std::getline(in, line) || line.empty()) throw Error(ErrorCode::EmptyInput, "missing CSV header");
  if (line.back() == '\r') line.pop_back();
  const auto header = split_csv_line(line);

  std::size_t energy_col = header.size();
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == "energy") energy_col = c;
  }
  if (energy_col == header.size() || energy_col == 0) {
    throw Error(ErrorCode::InvalidData, "header must be x1,...,xd,energy[,true_label]");
  }
  const bool labelled = header.size() == energy_col + 2 && header.back() == "true_label";
  if (header.size() != energy_col + 1 && !labelled) {
    throw Error(ErrorCode::InvalidData, "unexpected columns after 'energy'");
  }
  const std::size_t dim = energy_col;

  Dataset data(dim, frac_bits);
  std::vector<double> coords(dim);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw Error(ErrorCode::InvalidData, "line " + std::to_string(line_no) + ": expected " +
                                              std::to_string(header.size()) + " fields");
    }
    for (std::size_t k = 0; k < dim; ++k) coords[k] = parse_real(fields[k], line_no);
    data.add_point(coords, parse_real(fields[energy_col], line_no));
    if (labelled) {
      const double label = parse_real(fields.back(), line_no);
      if (label != std::floor(label) || label < -1) {
        throw Error(ErrorCode::InvalidData, "line " + std::to_string(line_no) + ": label must be an integer >= -1");
      }
      data.true_labels().push_back(static_cast<int>(label));
    }
  }
  if (data.empty()) throw Error(ErrorCode::EmptyInput, "dataset has no points");
  return data;
}

Dataset read_dataset_csv(const std::string& path, int frac_bits) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  return read_dataset_csv(in, frac_bits);
}

void write_dataset_csv(std::ostream& out, const Dataset& data) {
  for (std::size_t k = 0; k < data.dim(); ++k) out << 'x' << (k + 1) << ',';
  out << "energy";
  if (data.has_labels()) out << ",true_label";
  out << '\n';
  out << std::setprecision(17);
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (std::size_t k = 0; k < data.dim(); ++k) out << data.coord(i, k) << ',';
    out << data[i].energy;
    if (data.has_labels()) out << ',' << data.true_labels()[i];
    out << '\n';
  }
}

void write_dataset_csv(const std::string& path, const Dataset& data) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  write_dataset_csv(out, data);
}

}  // namespace qlue
