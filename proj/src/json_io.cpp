#include "wifipain/json_io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "wifipain/error.hpp"

namespace wifipain {

namespace {

Matrix matrix_from_json(const Json& m) {
  if (!m.is_array()) throw DataError("\"matrix\" must be an array of rows");
  std::vector<std::vector<double>> rows;
  rows.reserve(m.size());
  for (const auto& r : m) {
    if (!r.is_array()) throw DataError("\"matrix\" rows must be arrays");
    std::vector<double> row;
    row.reserve(r.size());
    for (const auto& v : r) {
      if (!v.is_number()) throw DataError("\"matrix\" entries must be numbers");
      row.push_back(v.get<double>());
    }
    rows.push_back(std::move(row));
  }
  return Matrix::from_rows(rows);
}

Neighborhood neighborhood_from_json(const Json& doc) {
  if (!doc.is_object()) throw DataError("expected a JSON object");
  for (const char* key : {"home_ids", "num_channels", "matrix"}) {
    if (!doc.contains(key)) throw DataError(std::string("missing key \"") + key + "\"");
  }
  try {
    return {doc.at("home_ids").get<std::vector<std::string>>(),
            doc.at("num_channels").get<int>()};
  } catch (const Json::exception& e) {
    throw DataError(std::string("bad home_ids/num_channels: ") + e.what());
  }
}

bool rows_one_hot(const Matrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    int ones = 0;
    for (double v : m.row(i)) {
      if (v == 1.0) {
        ++ones;
      } else if (v != 0.0) {
        return false;
      }
    }
    if (ones != 1) return false;
  }
  return true;
}

}  // namespace

Json to_json(const PainMatrix& p) {
  return Json{{"home_ids", p.neighborhood().home_ids()},
              {"num_channels", p.neighborhood().num_channels()},
              {"role", to_string(p.role())},
              {"matrix", p.values().to_rows()}};
}

PainMatrix pain_matrix_from_json(const Json& doc, MatrixRole role) {
  Neighborhood hood = neighborhood_from_json(doc);
  if (doc.contains("role")) {
    role = matrix_role_from_string(doc.at("role").get<std::string>());
  }
  return {std::move(hood), matrix_from_json(doc.at("matrix")), role};
}

Json to_json(const Neighborhood& hood, const ChannelAllocation& c) {
  if (hood.size() != c.homes()) {
    throw DimensionError("allocation has " + std::to_string(c.homes()) +
                         " rows but neighborhood has " +
                         std::to_string(hood.size()) + " homes");
  }
  return Json{{"home_ids", hood.home_ids()},
              {"num_channels", static_cast<int>(c.channels())},
              {"mode", c.mode() == AllocationMode::hard ? "hard" : "soft"},
              {"matrix", c.values().to_rows()}};
}

LabeledAllocation allocation_from_json(const Json& doc) {
  Neighborhood hood = neighborhood_from_json(doc);
  Matrix m = matrix_from_json(doc.at("matrix"));
  AllocationMode mode = rows_one_hot(m) ? AllocationMode::hard : AllocationMode::soft;
  if (doc.contains("mode")) {
    const auto s = doc.at("mode").get<std::string>();
    if (s == "hard") {
      mode = AllocationMode::hard;
    } else if (s == "soft") {
      mode = AllocationMode::soft;
    } else {
      throw DataError("unknown allocation mode '" + s + "'");
    }
  }
  if (m.rows() != hood.size()) {
    throw DimensionError("allocation has " + std::to_string(m.rows()) +
                         " rows but lists " + std::to_string(hood.size()) +
                         " home ids");
  }
  if (m.cols() != static_cast<std::size_t>(hood.num_channels())) {
    throw DimensionError("allocation has " + std::to_string(m.cols()) +
                         " columns but num_channels is " +
                         std::to_string(hood.num_channels()));
  }
  return {std::move(hood), ChannelAllocation(std::move(m), mode)};
}

Json to_json(const PainBreakdown& b) {
  return Json{{"total", b.total}, {"per_home", b.per_home}};
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << doc.dump(2) << '\n';
  if (!out) throw DataError("write failed for " + path.string());
}

std::string digest(const Matrix& m) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t word) {
    for (int b = 0; b < 8; ++b) {
      h ^= (word >> (8 * b)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  };
  mix(m.rows());
  mix(m.cols());
  for (double v : m.data()) mix(std::bit_cast<std::uint64_t>(v));
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace wifipain
