#include "wifipain/experiment.hpp"

#include <algorithm>
#include <future>
#include <set>

#include "wifipain/error.hpp"
#include "wifipain/random.hpp"
#include "wifipain/solvers.hpp"
#include "wifipain/telemetry_io.hpp"

namespace wifipain {

namespace {

namespace fs = std::filesystem;

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

std::vector<fs::path> path_list(const Json& doc, const char* key, const fs::path& base) {
  std::vector<fs::path> out;
  if (!doc.contains(key)) return out;
  const Json& v = doc.at(key);
  if (v.is_string()) {
    out.push_back(resolve(base, v.get<std::string>()));
  } else {
    for (const auto& item : v) out.push_back(resolve(base, item.get<std::string>()));
  }
  return out;
}

// Rethrows `e` with `step` prepended, keeping its category.
[[noreturn]] void rethrow_in(const std::string& step) {
  try {
    throw;
  } catch (const SolverError& e) {
    throw SolverError(step + ": " + e.what());
  } catch (const DimensionError& e) {
    throw DimensionError(step + ": " + e.what());
  } catch (const DataError& e) {
    throw DataError(step + ": " + e.what());
  }
}

UsageSeries day_series(const std::vector<UsageSample>& samples,
                       const EstimationConfig& cfg, const Neighborhood& hood) {
  EstimationConfig day_cfg = cfg;
  day_cfg.n_days = 1;
  day_cfg.first_day.reset();
  return build_usage_series(samples, day_cfg, hood);
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

}  // namespace

void ExperimentSpec::validate() const {
  if (train_usage.empty()) throw DataError("experiment needs at least one train day");
  if (test_usage.empty()) throw DataError("experiment needs at least one test day");
  if (macmap.empty()) throw DataError("experiment needs a macmap");
  if (num_channels < 2) throw DataError("num_channels must be >= 2");
  if (solvers.empty()) throw DataError("experiment lists no solvers");
  std::set<std::string> labels;
  for (const auto& s : solvers) {
    if (!labels.insert(s.label).second) {
      throw DataError("duplicate solver label '" + s.label + "'");
    }
  }
  estimation.validate();
}

ExperimentSpec experiment_spec_from_json(const Json& doc, const fs::path& base_dir) {
  if (!doc.is_object()) throw DataError("experiment spec must be a JSON object");
  static const std::set<std::string> known{"train_usage", "test_usage", "scans",
                                           "macmap",      "num_channels", "estimation",
                                           "solvers",     "seed",       "output"};
  for (const auto& [key, value] : doc.items()) {
    if (!known.count(key)) throw DataError("unknown experiment spec key '" + key + "'");
  }
  ExperimentSpec spec;
  try {
    spec.train_usage = path_list(doc, "train_usage", base_dir);
    spec.test_usage = path_list(doc, "test_usage", base_dir);
    spec.scans = path_list(doc, "scans", base_dir);
    if (doc.contains("macmap")) spec.macmap = resolve(base_dir, doc.at("macmap").get<std::string>());
    spec.num_channels = doc.value("num_channels", 2);
    if (doc.contains("estimation")) {
      spec.estimation = estimation_config_from_json(doc.at("estimation"));
    }
    if (doc.contains("solvers")) {
      for (const auto& s : doc.at("solvers")) {
        SolverSpec solver;
        if (s.is_string()) {
          solver.name = s.get<std::string>();
        } else {
          solver.name = s.at("name").get<std::string>();
          solver.label = s.value("label", std::string());
          if (s.contains("config")) solver.config = s.at("config");
        }
        if (solver.label.empty()) solver.label = solver.name;
        const auto& names = solver_names();
        if (std::find(names.begin(), names.end(), solver.name) == names.end()) {
          throw DataError("unknown solver '" + solver.name + "'");
        }
        spec.solvers.push_back(std::move(solver));
      }
    }
    spec.seed = doc.value("seed", std::uint64_t{0});
    if (doc.contains("output")) spec.output = resolve(base_dir, doc.at("output").get<std::string>());
  } catch (const Json::exception& e) {
    throw DataError(std::string("bad experiment spec: ") + e.what());
  }
  spec.validate();
  return spec;
}

ExperimentSpec load_experiment_spec(const fs::path& path) {
  try {
    return experiment_spec_from_json(read_json_file(path), path.parent_path());
  } catch (const Error&) {
    rethrow_in("spec " + path.string());
  }
}

ExperimentInputs load_inputs(const ExperimentSpec& spec) {
  spec.validate();
  MacMap macmap = read_macmap_csv(spec.macmap);
  if (macmap.size() == 0) throw DataError(spec.macmap.string() + ": no homes listed");
  Neighborhood hood(macmap.home_ids(), spec.num_channels);

  auto read_days = [](const std::vector<fs::path>& files) {
    std::vector<std::vector<UsageSample>> days;
    for (const auto& f : files) days.push_back(read_usage_csv(f));
    return days;
  };
  std::vector<ScanObservation> scans;
  for (const auto& f : spec.scans) {
    auto part = read_scans_csv(f);
    scans.insert(scans.end(), part.begin(), part.end());
  }
  return ExperimentInputs{.neighborhood = std::move(hood),
                          .train_days = read_days(spec.train_usage),
                          .test_days = read_days(spec.test_usage),
                          .scans = std::move(scans),
                          .macmap = std::move(macmap),
                          .estimation = spec.estimation,
                          .solvers = spec.solvers,
                          .seed = spec.seed};
}

std::uint64_t solver_seed(std::uint64_t seed, const std::string& label) {
  return derive_seed(seed, "solver/" + label);
}

const SolverOutcome& ExperimentReport::outcome(const std::string& label) const {
  for (const auto& s : solvers) {
    if (s.label == label) return s;
  }
  throw DataError("no solver labeled '" + label + "' in the report");
}

ExperimentReport run_experiment(const ExperimentInputs& in) {
  if (in.train_days.empty() || in.test_days.empty()) {
    throw DataError("experiment needs at least one train day and one test day");
  }
  if (in.solvers.empty()) throw DataError("experiment lists no solvers");
  const Neighborhood& hood = in.neighborhood;
  const int channels = hood.num_channels();

  auto series_of = [&](const std::vector<std::vector<UsageSample>>& days,
                       const char* what) {
    std::vector<UsageSeries> out;
    for (std::size_t d = 0; d < days.size(); ++d) {
      try {
        out.push_back(day_series(days[d], in.estimation, hood));
      } catch (const Error&) {
        rethrow_in(std::string("estimation (") + what + " day " + std::to_string(d) + ")");
      }
    }
    return out;
  };
  const auto train_series = series_of(in.train_days, "train");
  const auto test_series = series_of(in.test_days, "test");

  PainMatrix sensing = [&] {
    try {
      return binarize_sensing(snr_matrix(in.scans, in.macmap, hood), in.estimation);
    } catch (const Error&) {
      rethrow_in("estimation (scans)");
    }
  }();

  const PainMatrix u_train = co_usage(concatenate(train_series), hood);
  const PainMatrix u_test = co_usage(concatenate(test_series), hood);
  PainMatrix train_p = potential_pain(u_train, sensing);
  PainMatrix test_p = potential_pain(u_test, sensing);

  auto per_day_p = [&](const std::vector<UsageSeries>& series) {
    std::vector<PainMatrix> out;
    for (const auto& s : series) out.push_back(potential_pain(co_usage(s, hood), sensing));
    return out;
  };
  const auto train_day_p = per_day_p(train_series);
  const auto test_day_p = per_day_p(test_series);

  // Solvers run concurrently; outcomes are sorted by label.
  std::vector<std::future<SolverReport>> running;
  for (const auto& s : in.solvers) {
    running.push_back(std::async(std::launch::async, [&, s] {
      return run_solver(s.name, train_p, channels, s.config, solver_seed(in.seed, s.label));
    }));
  }

  std::vector<SolverOutcome> outcomes;
  for (std::size_t k = 0; k < running.size(); ++k) {
    const auto& s = in.solvers[k];
    SolverReport report = [&] {
      try {
        return running[k].get();
      } catch (const Error&) {
        rethrow_in("solver '" + s.label + "'");
      }
    }();
    SolverOutcome o{.label = s.label,
                    .seed = solver_seed(in.seed, s.label),
                    .report = std::move(report)};
    const ChannelAllocation& alloc = o.report.allocation;
    o.allocation_digest = digest(alloc.values());
    o.train_objective = total_pain(train_p, alloc);
    for (const auto& p : train_day_p) o.train_pain_by_day.push_back(total_pain(p, alloc));
    for (const auto& p : test_day_p) o.test_pain_by_day.push_back(total_pain(p, alloc));
    o.train_pain_per_day = mean(o.train_pain_by_day);
    o.test_pain = mean(o.test_pain_by_day);
    outcomes.push_back(std::move(o));
  }
  std::sort(outcomes.begin(), outcomes.end(),
            [](const auto& a, const auto& b) { return a.label < b.label; });

  return ExperimentReport{.neighborhood = hood,
                          .train_days = static_cast<int>(in.train_days.size()),
                          .test_days = static_cast<int>(in.test_days.size()),
                          .seed = in.seed,
                          .estimation = in.estimation,
                          .train_p = std::move(train_p),
                          .test_p = std::move(test_p),
                          .sensing = std::move(sensing),
                          .u_train_digest = digest(u_train.values()),
                          .u_test_digest = digest(u_test.values()),
                          .solvers = std::move(outcomes)};
}

Json to_json(const ExperimentReport& r) {
  Json solvers = Json::array();
  for (const auto& o : r.solvers) {
    solvers.push_back(Json{{"label", o.label},
                           {"solver", o.report.solver},
                           {"seed", o.seed},
                           {"allocation", to_json(r.neighborhood, o.report.allocation)},
                           {"allocation_digest", o.allocation_digest},
                           {"train_objective", o.train_objective},
                           {"train_pain_by_day", o.train_pain_by_day},
                           {"train_pain_per_day", o.train_pain_per_day},
                           {"test_pain_by_day", o.test_pain_by_day},
                           {"test_pain", o.test_pain},
                           {"config", o.report.config},
                           {"stats", o.report.stats}});
  }
  return Json{{"home_ids", r.neighborhood.home_ids()},
              {"num_channels", r.neighborhood.num_channels()},
              {"seed", r.seed},
              {"train_days", r.train_days},
              {"test_days", r.test_days},
              {"estimation", to_json(r.estimation)},
              {"digests",
               {{"U_train", r.u_train_digest},
                {"U_test", r.u_test_digest},
                {"Sb", digest(r.sensing.values())},
                {"P_train", digest(r.train_p.values())},
                {"P_test", digest(r.test_p.values())}}},
              {"solvers", std::move(solvers)}};
}

}  // namespace wifipain
