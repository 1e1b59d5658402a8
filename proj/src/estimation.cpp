#include "wifipain/estimation.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <set>

#include "wifipain/error.hpp"

namespace wifipain {

namespace {

std::string join(const std::set<std::string>& items) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += ", ";
    out += "'" + s + "'";
  }
  return out;
}

// Indices of `keys` grouped by key; inside a group ordered by timestamp,
// then input position.
template <typename Key>
std::vector<std::size_t> ordered_by_group(const std::vector<Key>& keys,
                                          const std::vector<Timestamp>& times) {
  std::vector<std::size_t> order(keys.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (keys[a] != keys[b]) return keys[a] < keys[b];
    return times[a] < times[b];
  });
  return order;
}

void require_same_homes(const PainMatrix& a, const PainMatrix& b) {
  if (a.size() != b.size()) {
    throw DimensionError(std::string(to_string(a.role())) + " is " +
                         std::to_string(a.size()) + "x" + std::to_string(a.size()) +
                         " but " + to_string(b.role()) + " is " +
                         std::to_string(b.size()) + "x" + std::to_string(b.size()));
  }
  if (a.neighborhood().home_ids() != b.neighborhood().home_ids()) {
    throw DataError(std::string(to_string(a.role())) + " and " +
                    to_string(b.role()) + " list different home ids");
  }
}

}  // namespace

std::string normalize_mac(const std::string& mac) {
  std::string out;
  out.reserve(mac.size());
  for (char c : mac) {
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

void MacMap::add(const std::string& mac, const std::string& home_id) {
  const std::string key = normalize_mac(mac);
  auto [it, inserted] = by_mac_.emplace(key, home_id);
  if (!inserted) {
    if (it->second != home_id) {
      throw DataError("MAC " + mac + " maps to both '" + it->second + "' and '" +
                      home_id + "'");
    }
    return;
  }
  entries_.emplace_back(key, home_id);
}

const std::string* MacMap::find(const std::string& mac) const {
  auto it = by_mac_.find(normalize_mac(mac));
  return it == by_mac_.end() ? nullptr : &it->second;
}

std::vector<std::string> MacMap::home_ids() const {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& [mac, home] : entries_) {
    if (seen.insert(home).second) out.push_back(home);
  }
  return out;
}

void EstimationConfig::validate() const {
  if (!(snr_threshold_db > 0.0) || !std::isfinite(snr_threshold_db)) {
    throw DataError("snr_threshold_db must be positive");
  }
  if (n_days && *n_days < 1) throw DataError("n_days must be at least 1");
  if (window == UsageWindow::evening &&
      !(0 <= evening_start_hour && evening_start_hour < evening_end_hour &&
        evening_end_hour <= 24)) {
    throw DataError("evening hours must satisfy 0 <= start < end <= 24");
  }
}

std::vector<int> EstimationConfig::kept_hours() const {
  std::vector<int> hours;
  const int lo = window == UsageWindow::evening ? evening_start_hour : 0;
  const int hi = window == UsageWindow::evening ? evening_end_hour : 24;
  for (int h = lo; h < hi; ++h) hours.push_back(h);
  return hours;
}

UsageSeries build_usage_series(const std::vector<UsageSample>& samples,
                               const EstimationConfig& cfg,
                               const Neighborhood& hood) {
  cfg.validate();
  std::set<std::string> unknown;
  std::vector<std::size_t> home_of(samples.size());
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const auto& s = samples[k];
    home_of[k] = hood.index_of(s.home_id);
    if (home_of[k] == hood.size()) unknown.insert(s.home_id);
    if (!std::isfinite(s.airtime_pct) || s.airtime_pct < 0.0 ||
        s.airtime_pct > 100.0) {
      throw DataError("airtime_pct " + std::to_string(s.airtime_pct) + " for '" +
                      s.home_id + "' at " + s.timestamp.to_string() +
                      " is outside [0,100]");
    }
  }
  if (!unknown.empty()) {
    throw DataError("usage samples reference unknown home ids: " + join(unknown));
  }

  UsageSeries series;
  series.home_ids = hood.home_ids();
  series.hours_of_day = cfg.kept_hours();

  std::chrono::sys_days first{};
  std::chrono::sys_days last{};
  if (!samples.empty()) {
    auto [lo, hi] = std::minmax_element(
        samples.begin(), samples.end(), [](const auto& a, const auto& b) {
          return a.timestamp.local_day() < b.timestamp.local_day();
        });
    first = lo->timestamp.local_day();
    last = hi->timestamp.local_day();
  }
  if (cfg.first_day) first = *cfg.first_day;
  series.first_day = first;
  series.n_days = cfg.n_days.value_or(
      samples.empty() ? 1 : static_cast<int>((last - first).count()) + 1);
  if (series.n_days < 1) throw DataError("estimation window has no days");

  const std::size_t per_day = series.hours_of_day.size();
  const std::size_t slots = per_day * static_cast<std::size_t>(series.n_days);
  series.values = Matrix(hood.size(), slots);

  std::vector<int> slot_of_hour(24, -1);
  for (std::size_t h = 0; h < per_day; ++h) {
    slot_of_hour[static_cast<std::size_t>(series.hours_of_day[h])] = static_cast<int>(h);
  }

  // (home, slot) per kept sample; samples outside the kept hours are dropped.
  std::vector<std::pair<std::size_t, std::size_t>> keys;
  std::vector<Timestamp> times;
  std::vector<double> vals;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const auto& s = samples[k];
    const auto day = (s.timestamp.local_day() - first).count();
    if (day < 0 || day >= series.n_days) {
      throw DataError("usage sample for '" + s.home_id + "' at " +
                      s.timestamp.to_string() + " falls outside the " +
                      std::to_string(series.n_days) + "-day window starting " +
                      format_date(first));
    }
    const int in_day = slot_of_hour[static_cast<std::size_t>(s.timestamp.local_hour())];
    if (in_day < 0) continue;
    keys.emplace_back(home_of[k], static_cast<std::size_t>(day) * per_day +
                                      static_cast<std::size_t>(in_day));
    times.push_back(s.timestamp);
    vals.push_back(s.airtime_pct);
  }

  const auto order = ordered_by_group(keys, times);
  for (std::size_t a = 0; a < order.size();) {
    const auto key = keys[order[a]];
    double sum = 0.0;
    std::size_t b = a;
    for (; b < order.size() && keys[order[b]] == key; ++b) sum += vals[order[b]];
    series.values(key.first, key.second) = sum / static_cast<double>(b - a);
    a = b;
  }
  return series;
}

UsageSeries concatenate(const std::vector<UsageSeries>& parts) {
  if (parts.empty()) throw DataError("nothing to concatenate");
  UsageSeries out;
  out.home_ids = parts.front().home_ids;
  out.first_day = parts.front().first_day;
  out.hours_of_day = parts.front().hours_of_day;
  std::size_t slots = 0;
  for (const auto& part : parts) {
    if (part.home_ids != out.home_ids || part.hours_of_day != out.hours_of_day) {
      throw DataError("cannot concatenate usage series with different homes or hours");
    }
    out.n_days += part.n_days;
    slots += part.time_slots();
  }
  out.values = Matrix(out.home_ids.size(), slots);
  std::size_t offset = 0;
  for (const auto& part : parts) {
    for (std::size_t i = 0; i < out.home_ids.size(); ++i) {
      auto src = part.values.row(i);
      std::copy(src.begin(), src.end(), out.values.row(i).begin() + static_cast<long>(offset));
    }
    offset += part.time_slots();
  }
  return out;
}

PainMatrix co_usage(const UsageSeries& series, const Neighborhood& hood) {
  if (series.home_ids != hood.home_ids()) {
    throw DataError("usage series homes do not match the neighborhood");
  }
  const std::size_t n = hood.size();
  const std::size_t t_len = series.time_slots();
  Matrix u(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    auto ui = series.values.row(i);
    for (std::size_t j = i; j < n; ++j) {
      auto uj = series.values.row(j);
      double dot = 0.0;
      for (std::size_t t = 0; t < t_len; ++t) dot += ui[t] * uj[t];
      u(i, j) = u(j, i) = std::log1p(dot);
    }
  }
  return {hood, std::move(u), MatrixRole::co_usage};
}

PainMatrix snr_matrix(const std::vector<ScanObservation>& scans,
                      const MacMap& mac_map, const Neighborhood& hood) {
  const std::size_t n = hood.size();
  std::set<std::string> unknown;
  std::vector<std::pair<std::size_t, std::size_t>> keys;
  std::vector<Timestamp> times;
  std::vector<double> vals;
  for (const auto& obs : scans) {
    const std::size_t i = hood.index_of(obs.scanner_home_id);
    if (i == n) {
      unknown.insert(obs.scanner_home_id);
      continue;
    }
    if (!std::isfinite(obs.snr_db) || obs.snr_db < 0.0) {
      throw DataError("snr_db " + std::to_string(obs.snr_db) + " from '" +
                      obs.scanner_home_id + "' must be finite and >= 0");
    }
    const std::string* home = mac_map.find(obs.sensed_mac);
    if (home == nullptr) continue;  // external AP
    const std::size_t j = hood.index_of(*home);
    if (j == n || j == i) continue;
    keys.emplace_back(i, j);
    times.push_back(obs.timestamp);
    vals.push_back(obs.snr_db);
  }
  if (!unknown.empty()) {
    throw DataError("scans reference unknown scanner home ids: " + join(unknown));
  }

  Matrix s(n, n);
  const auto order = ordered_by_group(keys, times);
  for (std::size_t a = 0; a < order.size();) {
    const auto key = keys[order[a]];
    double sum = 0.0;
    std::size_t b = a;
    for (; b < order.size() && keys[order[b]] == key; ++b) sum += vals[order[b]];
    s(key.first, key.second) = sum / static_cast<double>(b - a);
    a = b;
  }
  return {hood, std::move(s), MatrixRole::snr};
}

PainMatrix binarize_sensing(const PainMatrix& s, const EstimationConfig& cfg) {
  cfg.validate();
  const std::size_t n = s.size();
  Matrix sb(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double v = cfg.symmetrize ? 0.5 * (s(i, j) + s(j, i)) : s(i, j);
      sb(i, j) = v >= cfg.snr_threshold_db ? 1.0 : 0.0;
    }
  }
  return {s.neighborhood(), std::move(sb), MatrixRole::sensing};
}

PainMatrix potential_pain(const PainMatrix& u, const PainMatrix& sb) {
  require_same_homes(u, sb);
  if (sb.role() != MatrixRole::sensing) {
    throw DataError("potential_pain expects a binary sensing matrix");
  }
  const std::size_t n = u.size();
  Matrix p(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) p(i, j) = sb(i, j) * u(i, j);
  return {sb.neighborhood(), std::move(p), MatrixRole::potential_pain};
}

Estimate estimate(const std::vector<UsageSample>& samples,
                  const std::vector<ScanObservation>& scans,
                  const MacMap& mac_map, const Neighborhood& hood,
                  const EstimationConfig& cfg) {
  PainMatrix u = co_usage(build_usage_series(samples, cfg, hood), hood);
  PainMatrix s = snr_matrix(scans, mac_map, hood);
  PainMatrix sb = binarize_sensing(s, cfg);
  PainMatrix p = potential_pain(u, sb);
  return {std::move(u), std::move(s), std::move(sb), std::move(p)};
}

}  // namespace wifipain
