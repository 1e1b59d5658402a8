#include "wifipain/telemetry_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>

#include "wifipain/error.hpp"

namespace wifipain {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> out;
  while (true) {
    const auto comma = line.find(',');
    out.emplace_back(trim(line.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    line.remove_prefix(comma + 1);
  }
  return out;
}

// Calls `row(fields, where)` for every data row after checking the header.
template <typename RowFn>
void for_each_row(std::istream& in, const std::string& source,
                  const std::vector<std::string>& header, RowFn&& row) {
  std::string line;
  std::size_t line_no = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::string where = source + ":" + std::to_string(line_no) + ": ";
    auto fields = split(line);
    if (!saw_header) {
      if (fields != header) {
        std::string expected;
        for (const auto& h : header) expected += (expected.empty() ? "" : ",") + h;
        throw DataError(where + "expected header '" + expected + "'");
      }
      saw_header = true;
      continue;
    }
    if (fields.size() != header.size()) {
      throw DataError(where + "expected " + std::to_string(header.size()) +
                      " fields, got " + std::to_string(fields.size()));
    }
    try {
      row(fields);
    } catch (const DataError& e) {
      throw DataError(where + e.what());
    }
  }
  if (!saw_header) throw DataError(source + ": missing header row");
}

double parse_double(const std::string& s, const char* what) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw DataError(std::string("invalid ") + what + " '" + s + "'");
  }
  return v;
}

std::ifstream open(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return in;
}

std::ofstream create(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, ptr};
}

std::vector<UsageSample> parse_usage_csv(std::istream& in, const std::string& source) {
  std::vector<UsageSample> out;
  for_each_row(in, source, {"home_id", "timestamp", "airtime_pct"},
               [&](const std::vector<std::string>& f) {
                 if (f[0].empty()) throw DataError("empty home_id");
                 const double pct = parse_double(f[2], "airtime_pct");
                 if (!(pct >= 0.0 && pct <= 100.0)) {
                   throw DataError("airtime_pct " + f[2] + " outside [0,100]");
                 }
                 out.push_back({f[0], Timestamp::parse(f[1]), pct});
               });
  return out;
}

std::vector<ScanObservation> parse_scans_csv(std::istream& in, const std::string& source) {
  std::vector<ScanObservation> out;
  for_each_row(in, source, {"scanner_home_id", "sensed_mac", "snr_db", "timestamp"},
               [&](const std::vector<std::string>& f) {
                 if (f[0].empty()) throw DataError("empty scanner_home_id");
                 const double snr = parse_double(f[2], "snr_db");
                 if (!(snr >= 0.0) || !std::isfinite(snr)) {
                   throw DataError("snr_db " + f[2] + " must be finite and >= 0");
                 }
                 out.push_back({f[0], f[1], snr, Timestamp::parse(f[3])});
               });
  return out;
}

MacMap parse_macmap_csv(std::istream& in, const std::string& source) {
  MacMap map;
  for_each_row(in, source, {"mac", "home_id"}, [&](const std::vector<std::string>& f) {
    if (f[0].empty() || f[1].empty()) throw DataError("empty mac or home_id");
    map.add(f[0], f[1]);
  });
  return map;
}

std::vector<UsageSample> read_usage_csv(const std::filesystem::path& path) {
  auto in = open(path);
  return parse_usage_csv(in, path.string());
}

std::vector<ScanObservation> read_scans_csv(const std::filesystem::path& path) {
  auto in = open(path);
  return parse_scans_csv(in, path.string());
}

MacMap read_macmap_csv(const std::filesystem::path& path) {
  auto in = open(path);
  return parse_macmap_csv(in, path.string());
}

void write_usage_csv(const std::filesystem::path& path,
                     const std::vector<UsageSample>& samples) {
  auto out = create(path);
  out << "home_id,timestamp,airtime_pct\n";
  for (const auto& s : samples) {
    out << s.home_id << ',' << s.timestamp.to_string() << ','
        << format_double(s.airtime_pct) << '\n';
  }
}

void write_scans_csv(const std::filesystem::path& path,
                     const std::vector<ScanObservation>& scans) {
  auto out = create(path);
  out << "scanner_home_id,sensed_mac,snr_db,timestamp\n";
  for (const auto& s : scans) {
    out << s.scanner_home_id << ',' << s.sensed_mac << ',' << format_double(s.snr_db)
        << ',' << s.timestamp.to_string() << '\n';
  }
}

void write_macmap_csv(const std::filesystem::path& path, const MacMap& map) {
  auto out = create(path);
  out << "mac,home_id\n";
  for (const auto& [mac, home] : map.entries()) out << mac << ',' << home << '\n';
}

EstimationConfig estimation_config_from_json(const Json& doc) {
  EstimationConfig cfg;
  if (doc.is_null()) return cfg;
  if (!doc.is_object()) throw DataError("estimation config must be a JSON object");
  try {
    for (const auto& [key, value] : doc.items()) {
      if (key == "window") {
        const auto w = value.get<std::string>();
        if (w == "evening") {
          cfg.window = UsageWindow::evening;
        } else if (w == "whole_day") {
          cfg.window = UsageWindow::whole_day;
        } else {
          throw DataError("unknown window '" + w + "'");
        }
      } else if (key == "evening_hours") {
        const auto h = value.get<std::vector<int>>();
        if (h.size() != 2) throw DataError("evening_hours must be [start, end]");
        cfg.evening_start_hour = h[0];
        cfg.evening_end_hour = h[1];
      } else if (key == "n_days") {
        cfg.n_days = value.get<int>();
      } else if (key == "first_day") {
        cfg.first_day = parse_date(value.get<std::string>());
      } else if (key == "snr_threshold_db") {
        cfg.snr_threshold_db = value.get<double>();
      } else if (key == "symmetrize") {
        cfg.symmetrize = value.get<bool>();
      } else if (key == "num_channels") {
        // Consumed by callers that build the neighborhood.
      } else {
        throw DataError("unknown estimation config key '" + key + "'");
      }
    }
  } catch (const Json::exception& e) {
    throw DataError(std::string("bad estimation config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

Json to_json(const EstimationConfig& cfg) {
  Json doc{{"window", cfg.window == UsageWindow::evening ? "evening" : "whole_day"},
           {"evening_hours", {cfg.evening_start_hour, cfg.evening_end_hour}},
           {"snr_threshold_db", cfg.snr_threshold_db},
           {"symmetrize", cfg.symmetrize}};
  if (cfg.n_days) doc["n_days"] = *cfg.n_days;
  if (cfg.first_day) doc["first_day"] = format_date(*cfg.first_day);
  return doc;
}

}  // namespace wifipain
