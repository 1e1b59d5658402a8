#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "wifipain/pain.hpp"

namespace wifipain {

using Json = nlohmann::json;

// Matrix documents: {"home_ids": [...], "num_channels": k, "matrix": [[...]]}
// plus an optional "role" ("P", "U", "S", "Sb") and, for allocations, an
// optional "mode" ("hard" or "soft").

Json to_json(const PainMatrix& p);
PainMatrix pain_matrix_from_json(const Json& doc,
                                 MatrixRole role = MatrixRole::potential_pain);

struct LabeledAllocation {
  Neighborhood neighborhood;
  ChannelAllocation allocation;
};

Json to_json(const Neighborhood& hood, const ChannelAllocation& c);
/// Without a "mode" key the allocation is hard when every row is one-hot.
LabeledAllocation allocation_from_json(const Json& doc);

Json to_json(const PainBreakdown& b);

Json read_json_file(const std::filesystem::path& path);
/// Pretty-printed with two-space indent and a trailing newline.
void write_json_file(const std::filesystem::path& path, const Json& doc);

/// Stable FNV-1a digest of the IEEE-754 bit patterns, as 16 hex digits.
std::string digest(const Matrix& m);

}  // namespace wifipain
