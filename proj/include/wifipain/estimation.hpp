#pragma once

#include <chrono>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wifipain/matrix.hpp"
#include "wifipain/pain.hpp"
#include "wifipain/timestamp.hpp"

namespace wifipain {

/// One quarter-hourly AP measurement of download airtime, in percent.
struct UsageSample {
  std::string home_id;
  Timestamp timestamp;
  double airtime_pct = 0.0;
};

/// One beacon sensed during a radio scan.
struct ScanObservation {
  std::string scanner_home_id;
  std::string sensed_mac;
  double snr_db = 0.0;
  Timestamp timestamp;
};

// Partial MAC -> home mapping. MACs are compared case-insensitively; MACs
// that are not present belong to external APs.
class MacMap {
 public:
  /// Adding the same pair twice is a no-op; remapping a MAC throws.
  void add(const std::string& mac, const std::string& home_id);
  [[nodiscard]] const std::string* find(const std::string& mac) const;
  /// Home ids in order of first appearance.
  [[nodiscard]] std::vector<std::string> home_ids() const;
  /// (mac, home_id) pairs in insertion order.
  [[nodiscard]] const std::vector<std::pair<std::string, std::string>>& entries()
      const noexcept {
    return entries_;
  }
  [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }

 private:
  std::map<std::string, std::string> by_mac_;
  std::vector<std::pair<std::string, std::string>> entries_;
};

std::string normalize_mac(const std::string& mac);

enum class UsageWindow { whole_day, evening };

struct EstimationConfig {
  UsageWindow window = UsageWindow::evening;
  /// Half-open local-time interval [evening_start_hour, evening_end_hour).
  int evening_start_hour = 19;
  int evening_end_hour = 22;
  /// Number of days in the window. Unset: inferred from the samples.
  std::optional<int> n_days;
  /// First local day of the window. Unset: earliest local day in the samples.
  std::optional<std::chrono::sys_days> first_day;
  double snr_threshold_db = 10.0;
  bool symmetrize = true;

  void validate() const;
  /// Local hours of the day that enter the series, ascending.
  [[nodiscard]] std::vector<int> kept_hours() const;
};

/// Hourly usage, one row per home, one column per kept hour of each day.
struct UsageSeries {
  std::vector<std::string> home_ids;
  std::chrono::sys_days first_day{};
  int n_days = 0;
  std::vector<int> hours_of_day;
  Matrix values;

  [[nodiscard]] std::size_t time_slots() const noexcept { return values.cols(); }
};

UsageSeries build_usage_series(const std::vector<UsageSample>& samples,
                               const EstimationConfig& cfg,
                               const Neighborhood& hood);

/// Day-wise concatenation of series that share homes and hours of day.
UsageSeries concatenate(const std::vector<UsageSeries>& parts);

/// U_ij = ln(1 + sum_t u_ti u_tj), diagonal included.
PainMatrix co_usage(const UsageSeries& series, const Neighborhood& hood);

/// Mean SNR (dB) with which home i hears home j; unmapped MACs are dropped.
PainMatrix snr_matrix(const std::vector<ScanObservation>& scans,
                      const MacMap& mac_map, const Neighborhood& hood);

/// Optional symmetrization 0.5(S + S^T), then S^b_ij = [S_ij >= threshold].
PainMatrix binarize_sensing(const PainMatrix& s, const EstimationConfig& cfg);

/// P = S^b (elementwise) U.
PainMatrix potential_pain(const PainMatrix& u, const PainMatrix& sb);

struct Estimate {
  PainMatrix u;
  PainMatrix s;
  PainMatrix sb;
  PainMatrix p;
};

Estimate estimate(const std::vector<UsageSample>& samples,
                  const std::vector<ScanObservation>& scans,
                  const MacMap& mac_map, const Neighborhood& hood,
                  const EstimationConfig& cfg);

}  // namespace wifipain
