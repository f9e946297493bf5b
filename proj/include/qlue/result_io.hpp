#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "qlue/clue.hpp"
#include "qlue/dataset.hpp"

namespace qlue {

/// `index,label,role,density,nh_index,nh_distance`; nh_index is -1 and
/// nh_distance is `inf` for points without a nearest higher.
void write_result_csv(std::ostream& out, const Dataset& data, const ClusterResult& result);
void write_result_csv(const std::string& path, const Dataset& data, const ClusterResult& result);

/// Labels column of a result CSV, in index order.
std::vector<int> read_result_labels(std::istream& in);

nlohmann::json result_summary_json(const ClusterResult& result);

/// 64-bit FNV-1a of a file's bytes, as 16 hex digits.
std::string file_content_hash(const std::string& path);
std::string content_hash(std::string_view bytes);

void write_json(const std::string& path, const nlohmann::json& doc);

}  // namespace qlue
