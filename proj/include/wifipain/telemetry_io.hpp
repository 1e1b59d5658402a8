#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "wifipain/estimation.hpp"
#include "wifipain/json_io.hpp"

namespace wifipain {

// CSV layouts (header row required, comma separated, no quoting):
//   usage:  home_id,timestamp,airtime_pct
//   scans:  scanner_home_id,sensed_mac,snr_db,timestamp
//   macmap: mac,home_id
// Parse errors carry "<source>:<line>:".

std::vector<UsageSample> parse_usage_csv(std::istream& in, const std::string& source);
std::vector<ScanObservation> parse_scans_csv(std::istream& in, const std::string& source);
MacMap parse_macmap_csv(std::istream& in, const std::string& source);

std::vector<UsageSample> read_usage_csv(const std::filesystem::path& path);
std::vector<ScanObservation> read_scans_csv(const std::filesystem::path& path);
MacMap read_macmap_csv(const std::filesystem::path& path);

void write_usage_csv(const std::filesystem::path& path,
                     const std::vector<UsageSample>& samples);
void write_scans_csv(const std::filesystem::path& path,
                     const std::vector<ScanObservation>& scans);
void write_macmap_csv(const std::filesystem::path& path, const MacMap& map);

/// Shortest text that parses back to the same double.
std::string format_double(double v);

// {"window": "evening"|"whole_day", "evening_hours": [19, 22],
//  "n_days": 4, "first_day": "2021-08-21", "snr_threshold_db": 10,
//  "symmetrize": true}; every key optional.
EstimationConfig estimation_config_from_json(const Json& doc);
Json to_json(const EstimationConfig& cfg);

}  // namespace wifipain
