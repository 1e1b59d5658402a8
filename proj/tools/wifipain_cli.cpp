// wifipain: estimate potential-pain matrices from AP telemetry, choose
// per-home Wi-Fi channels, and run train/test experiments.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 solver error.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wifipain/error.hpp"
#include "wifipain/estimation.hpp"
#include "wifipain/experiment.hpp"
#include "wifipain/json_io.hpp"
#include "wifipain/solvers.hpp"
#include "wifipain/synth.hpp"
#include "wifipain/telemetry_io.hpp"

namespace fs = std::filesystem;
using namespace wifipain;

namespace {

constexpr const char* kVersion = "wifipain 0.1.0";

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kSolver = 3 };

fs::path sibling(const fs::path& out, const std::string& tag) {
  fs::path p = out;
  p.replace_filename(out.stem().string() + "." + tag + ".json");
  return p;
}

void cmd_estimate(const std::vector<std::string>& usage,
                  const std::vector<std::string>& scan_files, const std::string& macmap,
                  const std::string& config_path, const fs::path& out) {
  Json config = config_path.empty() ? Json::object() : read_json_file(config_path);
  const EstimationConfig cfg = estimation_config_from_json(config);
  const int channels = config.value("num_channels", 2);

  MacMap map = read_macmap_csv(macmap);
  if (map.size() == 0) throw DataError(macmap + ": no homes listed");
  Neighborhood hood(map.home_ids(), channels);

  std::vector<UsageSample> samples;
  for (const auto& f : usage) {
    auto part = read_usage_csv(f);
    samples.insert(samples.end(), part.begin(), part.end());
  }
  std::vector<ScanObservation> scans;
  for (const auto& f : scan_files) {
    auto part = read_scans_csv(f);
    scans.insert(scans.end(), part.begin(), part.end());
  }

  const Estimate est = estimate(samples, scans, map, hood, cfg);
  write_json_file(out, to_json(est.p));
  write_json_file(sibling(out, "U"), to_json(est.u));
  write_json_file(sibling(out, "S"), to_json(est.s));
  write_json_file(sibling(out, "Sb"), to_json(est.sb));
}

void cmd_solve(const fs::path& pain_path, std::optional<int> channels,
               const std::string& solver, std::uint64_t seed, const std::string& config_path,
               const fs::path& out) {
  const PainMatrix p = pain_matrix_from_json(read_json_file(pain_path));
  const int k = channels.value_or(p.neighborhood().num_channels());
  const Json config = config_path.empty() ? Json::object() : read_json_file(config_path);
  const SolverReport report = run_solver(solver, p, k, config, seed);
  const Json doc = to_json(report, p.neighborhood().with_channels(k));
  if (!out.empty()) write_json_file(out, doc);
  std::cout << Json(report.objective).dump() << '\n';
}

void cmd_evaluate(const fs::path& pain_path, const fs::path& allocation_path) {
  const PainMatrix p = pain_matrix_from_json(read_json_file(pain_path));
  Json doc = read_json_file(allocation_path);
  if (doc.is_object() && doc.contains("allocation")) doc = doc.at("allocation");
  const LabeledAllocation a = allocation_from_json(doc);
  if (a.neighborhood.home_ids() != p.neighborhood().home_ids()) {
    if (a.neighborhood.size() != p.size()) {
      throw DimensionError("allocation covers " + std::to_string(a.neighborhood.size()) +
                           " homes but the pain matrix has " + std::to_string(p.size()));
    }
    throw DataError("allocation and pain matrix list different home ids");
  }
  const PainBreakdown b = per_home_pain(p, a.allocation);
  Json per_home = Json::object();
  for (std::size_t i = 0; i < b.per_home.size(); ++i) {
    per_home[p.neighborhood().home_ids()[i]] = b.per_home[i];
  }
  std::cout << Json{{"total", b.total}, {"per_home", per_home}}.dump(2) << '\n';
}

void cmd_pipeline(const fs::path& spec_path, const fs::path& out_override) {
  const ExperimentSpec spec = load_experiment_spec(spec_path);
  const ExperimentReport report = run_experiment(load_inputs(spec));
  const Json doc = to_json(report);
  const fs::path out = out_override.empty() ? spec.output : out_override;
  if (out.empty()) {
    std::cout << doc.dump(2) << '\n';
  } else {
    write_json_file(out, doc);
    for (const auto& o : report.solvers) {
      std::cout << o.label << ": train_pain_per_day=" << Json(o.train_pain_per_day).dump()
                << " test_pain=" << Json(o.test_pain).dump() << '\n';
    }
  }
}

void cmd_synth(const std::string& config_path, const fs::path& out_dir) {
  const SynthConfig cfg = synth_config_from_json(read_json_file(config_path));
  const SynthData data = generate(cfg);
  write_synth(out_dir, data);

  // A ready-to-run experiment over the generated days.
  Json train = Json::array();
  Json test = Json::array();
  for (int d = 0; d < data.n_train_days; ++d) train.push_back(usage_day_filename(d));
  for (int d = 0; d < data.n_test_days; ++d) {
    test.push_back(usage_day_filename(data.n_train_days + d));
  }
  if (!test.empty()) {
    write_json_file(out_dir / "experiment.json",
                    Json{{"train_usage", train},
                         {"test_usage", test},
                         {"scans", {"scans.csv"}},
                         {"macmap", "macmap.csv"},
                         {"num_channels", cfg.num_channels},
                         {"estimation", to_json(cfg.truth_estimation)},
                         {"solvers", {"anneal", "bnb"}},
                         {"seed", cfg.seed},
                         {"output", "report.json"}});
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wi-Fi potential-pain estimation and channel allocation"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::vector<std::string> usage_files;
  std::vector<std::string> scan_files;
  std::string macmap;
  std::string config;
  std::string out;
  auto* estimate = app.add_subcommand("estimate", "Estimate U, S, S^b and P from telemetry CSVs");
  estimate->add_option("--usage", usage_files, "Usage CSV files")->required()->check(CLI::ExistingFile);
  estimate->add_option("--scans", scan_files, "Scan CSV files")->check(CLI::ExistingFile);
  estimate->add_option("--macmap", macmap, "MAC-to-home CSV")->required()->check(CLI::ExistingFile);
  estimate->add_option("--config", config, "Estimation config JSON")->check(CLI::ExistingFile);
  estimate->add_option("--out", out, "Output P JSON; U/S/Sb go to <stem>.U.json etc.")->required();

  std::string pain;
  std::optional<int> channels;
  std::string solver = "anneal";
  std::uint64_t seed = 0;
  auto* solve = app.add_subcommand("solve", "Choose a channel allocation for a pain matrix");
  solve->add_option("--pain", pain, "Pain matrix JSON")->required()->check(CLI::ExistingFile);
  solve->add_option("--channels", channels, "Number of channels (default: from the JSON)")
      ->check(CLI::Range(2, 1 << 20));
  solve->add_option("--solver", solver, "anneal | exhaustive | bnb | cd")
      ->check(CLI::IsMember(solver_names()));
  solve->add_option("--seed", seed, "Random seed");
  solve->add_option("--config", config, "Solver config JSON")->check(CLI::ExistingFile);
  solve->add_option("--out", out, "Solver report JSON");

  std::string allocation;
  auto* evaluate = app.add_subcommand("evaluate", "Print total and per-home pain of an allocation");
  evaluate->add_option("--pain", pain, "Pain matrix JSON")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--allocation", allocation, "Allocation or solver report JSON")
      ->required()
      ->check(CLI::ExistingFile);

  std::string spec;
  auto* pipeline = app.add_subcommand("pipeline", "Run a train/test experiment");
  pipeline->add_option("--spec", spec, "Experiment spec JSON")->required()->check(CLI::ExistingFile);
  pipeline->add_option("--out", out, "Report path (default: the spec's output)");

  auto* synth = app.add_subcommand("synth", "Generate a synthetic neighborhood");
  synth->add_option("--config", config, "Synth config JSON")->required()->check(CLI::ExistingFile);
  synth->add_option("--out", out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*estimate) {
      cmd_estimate(usage_files, scan_files, macmap, config, out);
    } else if (*solve) {
      cmd_solve(pain, channels, solver, seed, config, out);
    } else if (*evaluate) {
      cmd_evaluate(pain, allocation);
    } else if (*pipeline) {
      cmd_pipeline(spec, out);
    } else if (*synth) {
      cmd_synth(config, out);
    }
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return kSolver;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  } catch (const Json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  }
  return kOk;
}
