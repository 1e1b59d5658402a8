#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "wifipain/estimation.hpp"
#include "wifipain/json_io.hpp"
#include "wifipain/pain.hpp"

namespace wifipain {

struct Layout {
  enum class Kind { grid, building };
  Kind kind = Kind::grid;
  /// grid: rows x cols; building: floors x units_per_floor. Unit spacing.
  int a = 1;
  int b = 1;

  [[nodiscard]] int capacity() const noexcept { return a * b; }
};

struct SynthConfig {
  int n_homes = 8;
  Layout layout{Layout::Kind::building, 2, 4};
  double sensing_radius = 1.5;
  /// Per-home mean airtime % for each of the 24 local hours. Empty: drawn
  /// from the seed.
  std::vector<std::vector<double>> base_usage_profile;
  /// Sigma of the log-normal factor drawn per (home, day); scaled values
  /// are clipped to 100.
  double day_noise_sigma = 0.0;
  int n_train_days = 4;
  int n_test_days = 1;
  std::uint64_t seed = 0;

  int num_channels = 2;
  std::chrono::sys_days first_day =
      std::chrono::sys_days{std::chrono::year{2021} / 8 / 21};
  int utc_offset_minutes = -240;
  int scans_per_pair = 3;
  /// Scan rows per home that sense APs outside the neighborhood.
  int external_scans_per_home = 1;
  /// Estimation settings used to derive the ground-truth P from one
  /// noise-free day.
  EstimationConfig truth_estimation{};

  void validate() const;
};

SynthConfig synth_config_from_json(const Json& doc);

struct SynthData {
  Neighborhood neighborhood;
  std::vector<std::pair<double, double>> positions;
  /// Noise-free hourly usage, homes x 24.
  std::vector<std::vector<double>> base_profile;
  /// Quarter-hourly samples per day; train days first, then test days.
  std::vector<std::vector<UsageSample>> days;
  std::vector<ScanObservation> scans;
  MacMap macmap;
  PainMatrix ground_truth;
  int n_train_days = 0;
  int n_test_days = 0;
};

SynthData generate(const SynthConfig& cfg);

/// usage_day_<k>.csv, scans.csv, macmap.csv, ground_truth_p.json.
void write_synth(const std::filesystem::path& dir, const SynthData& data);

std::string usage_day_filename(int day);

}  // namespace wifipain
