#include "qlue/result_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "qlue/error.hpp"

namespace qlue {

void write_result_csv(std::ostream& out, const Dataset& data, const ClusterResult& result) {
  out << "index,label,role,density,nh_index,nh_distance\n";
  out << std::setprecision(17);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto& p = data[i];
    out << i << ',' << result.labels.at(i) << ',' << to_string(p.role) << ',' << p.density << ',';
    if (p.nearest_higher) {
      out << *p.nearest_higher << ',' << p.nh_distance;
    } else {
      out << "-1,inf";
    }
    out << '\n';
  }
}

void write_result_csv(const std::string& path, const Dataset& data, const ClusterResult& result) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  write_result_csv(out, data, result);
}

std::vector<int> read_result_labels(std::istream& in) {
  std::string line;
  std::vector<int> labels;
  if (!std::getline(in, line)) throw Error(ErrorCode::EmptyInput, "empty result file");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string index, label;
    std::getline(ss, index, ',');
    std::getline(ss, label, ',');
    labels.push_back(std::stoi(label));
  }
  return labels;
}

nlohmann::json result_summary_json(const ClusterResult& result) {
  return nlohmann::json{{"n_clusters", result.n_clusters},
                        {"seeds", result.seeds},
                        {"outlier_count", result.outliers.size()},
                        {"unassigned_count", std::count(result.labels.begin(), result.labels.end(), -1) -
                                                 static_cast<std::ptrdiff_t>(result.outliers.size())}};
}

std::string content_hash(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string file_content_hash(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return content_hash(ss.str());
}

void write_json(const std::string& path, const nlohmann::json& doc) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  out << doc.dump(2) << '\n';
}

}  // namespace qlue
