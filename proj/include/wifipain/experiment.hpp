#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "wifipain/estimation.hpp"
#include "wifipain/json_io.hpp"
#include "wifipain/pain.hpp"
#include "wifipain/report.hpp"

namespace wifipain {

struct SolverSpec {
  std::string name;
  /// Unique row label in the report; defaults to `name`.
  std::string label;
  Json config = Json::object();
};

// Train/test experiment description. On disk:
//   {"train_usage": [csv...], "test_usage": [csv...], "scans": [csv...],
//    "macmap": csv, "num_channels": 2, "estimation": {...},
//    "solvers": [{"name": "anneal", "label": "...", "config": {...}}, ...],
//    "seed": 0, "output": "report.json"}
// Each usage file holds one local day. Relative paths resolve against the
// spec file's directory.
struct ExperimentSpec {
  std::vector<std::filesystem::path> train_usage;
  std::vector<std::filesystem::path> test_usage;
  std::vector<std::filesystem::path> scans;
  std::filesystem::path macmap;
  int num_channels = 2;
  EstimationConfig estimation;
  std::vector<SolverSpec> solvers;
  std::uint64_t seed = 0;
  std::filesystem::path output;

  void validate() const;
};

ExperimentSpec experiment_spec_from_json(const Json& doc,
                                         const std::filesystem::path& base_dir);
ExperimentSpec load_experiment_spec(const std::filesystem::path& path);

/// Parsed telemetry ready for run_experiment.
struct ExperimentInputs {
  Neighborhood neighborhood;
  std::vector<std::vector<UsageSample>> train_days{};
  std::vector<std::vector<UsageSample>> test_days{};
  std::vector<ScanObservation> scans{};
  MacMap macmap{};
  EstimationConfig estimation{};
  std::vector<SolverSpec> solvers{};
  std::uint64_t seed = 0;
};

/// The neighborhood is the macmap's homes in order of first appearance.
ExperimentInputs load_inputs(const ExperimentSpec& spec);

struct SolverOutcome {
  std::string label;
  std::uint64_t seed = 0;
  SolverReport report;
  std::string allocation_digest{};
  double train_objective = 0.0;  // on the pooled train P
  std::vector<double> train_pain_by_day{};
  double train_pain_per_day = 0.0;
  std::vector<double> test_pain_by_day{};
  double test_pain = 0.0;  // mean over test days
};

struct ExperimentReport {
  Neighborhood neighborhood;
  int train_days = 0;
  int test_days = 0;
  std::uint64_t seed = 0;
  EstimationConfig estimation;
  PainMatrix train_p;
  PainMatrix test_p;  // pooled over test days
  PainMatrix sensing;
  std::string u_train_digest;
  std::string u_test_digest;
  /// Sorted by label.
  std::vector<SolverOutcome> solvers;

  [[nodiscard]] const SolverOutcome& outcome(const std::string& label) const;
};

/// Estimates train P (pooled train days, train scans), solves it with every
/// solver, then scores each frozen allocation on per-day train P and on
/// per-day test P built from test usage and the train sensing matrix.
ExperimentReport run_experiment(const ExperimentInputs& inputs);

Json to_json(const ExperimentReport& report);

/// Sub-seed handed to solver `label` by an experiment with seed `seed`.
std::uint64_t solver_seed(std::uint64_t seed, const std::string& label);

}  // namespace wifipain
