#include "wifipain/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "wifipain/error.hpp"
#include "wifipain/random.hpp"
#include "wifipain/telemetry_io.hpp"

namespace wifipain {

namespace {

std::string home_id_at(const Layout& layout, int k) {
  const int r = k / layout.b;
  const int c = k % layout.b;
  if (layout.kind == Layout::Kind::building) {
    return std::to_string((r + 1) * 100 + (c + 1));  // 101, 102, ... 201, ...
  }
  return "g" + std::to_string(r) + "-" + std::to_string(c);
}

std::string mac_string(unsigned prefix, int k) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%02x:00:00:00:%02x:%02x", prefix,
                (static_cast<unsigned>(k) >> 8) & 0xffU, static_cast<unsigned>(k) & 0xffU);
  return buf;
}

// Flat daytime level, optional midday bump and an evening peak.
std::vector<double> random_profile(Rng& rng) {
  const double level = uniform(rng, 1.0, 10.0);
  const double day_amp = uniform(rng, 0.0, 20.0);
  const double day_peak = uniform(rng, 8.0, 15.0);
  const double eve_amp = uniform(rng, 5.0, 60.0);
  const double eve_peak = uniform(rng, 18.0, 22.5);
  const double eve_width = uniform(rng, 1.0, 3.5);
  std::vector<double> hours(24);
  for (int h = 0; h < 24; ++h) {
    const double dd = (h - day_peak) / 2.5;
    const double de = (h - eve_peak) / eve_width;
    const double v = level + day_amp * std::exp(-0.5 * dd * dd) +
                     eve_amp * std::exp(-0.5 * de * de);
    hours[static_cast<std::size_t>(h)] = std::min(v, 100.0);
  }
  return hours;
}

std::vector<UsageSample> emit_day(const Neighborhood& hood,
                                  const std::vector<std::vector<double>>& hourly,
                                  std::chrono::sys_days day, int offset_min) {
  std::vector<UsageSample> out;
  out.reserve(hood.size() * 96);
  for (int h = 0; h < 24; ++h) {
    for (int q = 0; q < 4; ++q) {
      const Timestamp ts = Timestamp::from_local(day, h, 15 * q, offset_min);
      for (std::size_t i = 0; i < hood.size(); ++i) {
        out.push_back({hood.home_ids()[i], ts, hourly[i][static_cast<std::size_t>(h)]});
      }
    }
  }
  return out;
}

}  // namespace

void SynthConfig::validate() const {
  if (n_homes < 2) throw DataError("synth needs at least 2 homes");
  if (layout.a < 1 || layout.b < 1) throw DataError("layout dimensions must be >= 1");
  if (n_homes > layout.capacity()) {
    throw DataError("layout holds " + std::to_string(layout.capacity()) +
                    " homes, asked for " + std::to_string(n_homes));
  }
  if (!(sensing_radius > 0.0)) throw DataError("sensing_radius must be > 0");
  if (!(day_noise_sigma >= 0.0)) throw DataError("day_noise_sigma must be >= 0");
  if (n_train_days < 1 || n_test_days < 0) {
    throw DataError("need n_train_days >= 1 and n_test_days >= 0");
  }
  if (num_channels < 2) throw DataError("num_channels must be >= 2");
  if (scans_per_pair < 1 || external_scans_per_home < 0) {
    throw DataError("scans_per_pair must be >= 1, external_scans_per_home >= 0");
  }
  if (!base_usage_profile.empty()) {
    if (base_usage_profile.size() != static_cast<std::size_t>(n_homes)) {
      throw DataError("base_usage_profile needs one row per home");
    }
    for (const auto& row : base_usage_profile) {
      if (row.size() != 24) throw DataError("base_usage_profile rows need 24 hours");
      for (double v : row) {
        if (!(v >= 0.0 && v <= 100.0)) {
          throw DataError("base_usage_profile values must lie in [0,100]");
        }
      }
    }
  }
  truth_estimation.validate();
}

SynthConfig synth_config_from_json(const Json& doc) {
  SynthConfig cfg;
  if (!doc.is_object()) throw DataError("synth config must be a JSON object");
  try {
    for (const auto& [key, value] : doc.items()) {
      if (key == "n_homes") {
        cfg.n_homes = value.get<int>();
      } else if (key == "layout") {
        const auto kind = value.at("kind").get<std::string>();
        if (kind == "grid") {
          cfg.layout = {Layout::Kind::grid, value.at("rows").get<int>(),
                        value.at("cols").get<int>()};
        } else if (kind == "building") {
          cfg.layout = {Layout::Kind::building, value.at("floors").get<int>(),
                        value.at("units_per_floor").get<int>()};
        } else {
          throw DataError("unknown layout kind '" + kind + "'");
        }
      } else if (key == "sensing_radius") {
        cfg.sensing_radius = value.get<double>();
      } else if (key == "base_usage_profile") {
        cfg.base_usage_profile = value.get<std::vector<std::vector<double>>>();
      } else if (key == "day_noise_sigma") {
        cfg.day_noise_sigma = value.get<double>();
      } else if (key == "n_train_days") {
        cfg.n_train_days = value.get<int>();
      } else if (key == "n_test_days") {
        cfg.n_test_days = value.get<int>();
      } else if (key == "seed") {
        cfg.seed = value.get<std::uint64_t>();
      } else if (key == "num_channels") {
        cfg.num_channels = value.get<int>();
      } else if (key == "first_day") {
        cfg.first_day = parse_date(value.get<std::string>());
      } else if (key == "utc_offset_minutes") {
        cfg.utc_offset_minutes = value.get<int>();
      } else if (key == "scans_per_pair") {
        cfg.scans_per_pair = value.get<int>();
      } else if (key == "external_scans_per_home") {
        cfg.external_scans_per_home = value.get<int>();
      } else if (key == "truth_estimation") {
        cfg.truth_estimation = estimation_config_from_json(value);
      } else {
        throw DataError("unknown synth config key '" + key + "'");
      }
    }
  } catch (const Json::exception& e) {
    throw DataError(std::string("bad synth config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

SynthData generate(const SynthConfig& cfg) {
  cfg.validate();
  const auto n = static_cast<std::size_t>(cfg.n_homes);

  std::vector<std::string> ids;
  std::vector<std::pair<double, double>> pos;
  for (int k = 0; k < cfg.n_homes; ++k) {
    ids.push_back(home_id_at(cfg.layout, k));
    pos.emplace_back(k % cfg.layout.b, k / cfg.layout.b);
  }
  Neighborhood hood(ids, cfg.num_channels);

  MacMap macmap;
  for (std::size_t i = 0; i < n; ++i) macmap.add(mac_string(0x02, static_cast<int>(i)), ids[i]);

  std::vector<std::vector<double>> base = cfg.base_usage_profile;
  if (base.empty()) {
    Rng rng = make_rng(derive_seed(cfg.seed, "synth/profile"));
    for (std::size_t i = 0; i < n; ++i) base.push_back(random_profile(rng));
  }

  const int total_days = cfg.n_train_days + cfg.n_test_days;
  std::vector<std::vector<UsageSample>> days;
  Rng usage_rng = make_rng(derive_seed(cfg.seed, "synth/usage"));
  for (int d = 0; d < total_days; ++d) {
    auto hourly = base;
    if (cfg.day_noise_sigma > 0.0) {
      for (auto& row : hourly) {
        const double factor = std::exp(cfg.day_noise_sigma * standard_normal(usage_rng));
        for (double& v : row) v = std::min(100.0, v * factor);
      }
    }
    days.push_back(emit_day(hood, hourly, cfg.first_day + std::chrono::days(d),
                            cfg.utc_offset_minutes));
  }

  std::vector<ScanObservation> scans;
  Rng scan_rng = make_rng(derive_seed(cfg.seed, "synth/scans"));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double dist = std::hypot(pos[i].first - pos[j].first,
                                     pos[i].second - pos[j].second);
      if (dist > cfg.sensing_radius) continue;
      for (int s = 0; s < cfg.scans_per_pair; ++s) {
        const auto day = cfg.first_day + std::chrono::days(s % cfg.n_train_days);
        scans.push_back({ids[i], mac_string(0x02, static_cast<int>(j)),
                         uniform(scan_rng, 10.0, 30.0),
                         Timestamp::from_local(day, (2 + s) % 24, 0, cfg.utc_offset_minutes)});
      }
    }
    for (int e = 0; e < cfg.external_scans_per_home; ++e) {
      scans.push_back({ids[i], mac_string(0x0a, static_cast<int>(i) * 16 + e),
                       uniform(scan_rng, 0.0, 40.0),
                       Timestamp::from_local(cfg.first_day, 1, 0, cfg.utc_offset_minutes)});
    }
  }

  EstimationConfig truth_cfg = cfg.truth_estimation;
  truth_cfg.n_days = 1;
  truth_cfg.first_day = cfg.first_day;
  const auto truth_day = emit_day(hood, base, cfg.first_day, cfg.utc_offset_minutes);
  PainMatrix truth = estimate(truth_day, scans, macmap, hood, truth_cfg).p;

  return SynthData{.neighborhood = std::move(hood),
                   .positions = std::move(pos),
                   .base_profile = std::move(base),
                   .days = std::move(days),
                   .scans = std::move(scans),
                   .macmap = std::move(macmap),
                   .ground_truth = std::move(truth),
                   .n_train_days = cfg.n_train_days,
                   .n_test_days = cfg.n_test_days};
}

std::string usage_day_filename(int day) {
  return "usage_day_" + std::to_string(day) + ".csv";
}

void write_synth(const std::filesystem::path& dir, const SynthData& data) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw DataError("cannot create " + dir.string() + ": " + ec.message());
  for (std::size_t d = 0; d < data.days.size(); ++d) {
    write_usage_csv(dir / usage_day_filename(static_cast<int>(d)), data.days[d]);
  }
  write_scans_csv(dir / "scans.csv", data.scans);
  write_macmap_csv(dir / "macmap.csv", data.macmap);
  write_json_file(dir / "ground_truth_p.json", to_json(data.ground_truth));
}

}  // namespace wifipain
