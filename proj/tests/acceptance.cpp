// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "wifipain/anneal.hpp"
#include "wifipain/estimation.hpp"
#include "wifipain/exact.hpp"
#include "wifipain/experiment.hpp"
#include "wifipain/synth.hpp"

using namespace wifipain;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances.
constexpr double kBnbTimeLimitS = 60.0;
constexpr double kAnnealTimeLimitS = 600.0;
constexpr double kAnnealHitRate = 0.90;
constexpr double kAnnealSlack = 1.10;
constexpr double kAnnealAbsSlack = 1e-9;
constexpr double kMatchRelTol = 1e-9;  // "matches the optimum value"
constexpr double kFdStep = 1e-5;
constexpr double kFdRelTol = 1e-4;
constexpr double kIdentityTol = 1e-12;
constexpr double kEstimationTol = 1e-9;
constexpr double kSoftHardTol = 1e-3;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// 1
Outcome oracle_equivalence() {
  std::mt19937_64 rng(1001);
  const auto t0 = std::chrono::steady_clock::now();
  int mismatches = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 3 + static_cast<std::size_t>(trial % 10);  // 3..12
    const int k = 2 + trial % 2;
    const PainMatrix p =
        oracle::make_pain(oracle::random_pain(rng, n, 0.5, (trial / 2) % 2 == 0), k);
    if (solve_branch_and_bound(p, k).objective != solve_exhaustive(p, k).objective) ++mismatches;
  }
  const double secs = seconds_since(t0);
  return {mismatches == 0 && secs < kBnbTimeLimitS,
          fmt("100 instances, %d mismatches, %.2f s (limit %.0f s)", mismatches, secs,
              kBnbTimeLimitS)};
}

struct AnnealInstance {
  PainMatrix p;
  int k;
  double optimum;
  SolverReport report;
};

std::vector<AnnealInstance> anneal_instances() {
  std::mt19937_64 rng(2002);
  std::vector<AnnealInstance> out;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 4 + static_cast<std::size_t>(trial % 7);  // 4..10
    const int k = 2 + trial % 2;
    PainMatrix p = oracle::make_pain(oracle::random_pain(rng, n, 0.5, (trial / 2) % 2 == 0), k);
    AnnealConfig cfg;
    cfg.restarts = 5;
    cfg.seed = static_cast<std::uint64_t>(trial);
    cfg.trace_stride = 0;
    SolverReport report = solve_anneal(p, k, cfg);
    const double optimum = solve_exhaustive(p, k).objective;
    out.push_back({std::move(p), k, optimum, std::move(report)});
  }
  return out;
}

// 2
Outcome anneal_quality(const std::vector<AnnealInstance>& runs, double secs) {
  int hits = 0;
  int over = 0;
  double worst_ratio = 1.0;
  for (const auto& r : runs) {
    const double a = r.report.objective;
    if (std::abs(a - r.optimum) <= kMatchRelTol * (1.0 + r.optimum)) ++hits;
    if (a > kAnnealSlack * r.optimum + kAnnealAbsSlack) ++over;
    if (r.optimum > 0.0) worst_ratio = std::max(worst_ratio, a / r.optimum);
  }
  const double rate = static_cast<double>(hits) / static_cast<double>(runs.size());
  return {rate >= kAnnealHitRate && over == 0 && secs < kAnnealTimeLimitS,
          fmt("optimal on %d/%zu (%.0f%%, need %.0f%%), %d above 1.10x, worst ratio %.4f, %.1f s",
              hits, runs.size(), 100.0 * rate, 100.0 * kAnnealHitRate, over, worst_ratio, secs)};
}

// 3
Outcome gradient_check() {
  std::mt19937_64 rng(3003);
  std::normal_distribution<double> g(0.0, 0.5);
  double worst = 0.0;
  int count = 0;
  for (double beta : {1.0, 10.0}) {
    for (double lambda : {0.0, 0.01}) {
      for (int trial = 0; trial < 5; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(trial);  // 2..6
        const int k = 2 + trial % 2;
        const PainMatrix p = oracle::make_pain(oracle::random_pain(rng, n, 0.7, trial % 2 == 0), k);
        Matrix w(n, static_cast<std::size_t>(k));
        for (double& v : w.data()) v = g(rng);
        const Matrix analytic = loss_gradient(p, SolverWeights(w), beta, lambda);
        const Matrix numeric = oracle::finite_difference(
            [&](const Matrix& x) { return soft_pain(p, SolverWeights(x), beta, lambda); }, w,
            kFdStep);
        worst = std::max(worst, oracle::relative_error(analytic, numeric));
        ++count;
      }
    }
  }
  return {worst <= kFdRelTol,
          fmt("%d instances, worst relative error %.3e (limit %.0e)", count, worst, kFdRelTol)};
}

// 4
Outcome exact_identities() {
  auto pm = [](Matrix m) { return oracle::make_pain(m); };
  const ChannelAllocation half(Matrix{{0.5, 0.5}, {0.5, 0.5}}, AllocationMode::soft);
  const double cases[][2] = {
      {total_pain(pm(Matrix{{0, 1}, {1, 0}}), ChannelAllocation::from_channels({0, 1}, 2)), 0.0},
      {total_pain(pm(Matrix{{0, 2}, {3, 0}}), ChannelAllocation::from_channels({0, 0}, 2)), 5.0},
      {total_pain(pm(Matrix{{0, 2}, {3, 0}}), half), 2.5},
      {total_pain(pm(Matrix{{0}}), ChannelAllocation::from_channels({1}, 2)), 0.0},
  };
  double worst = 0.0;
  for (const auto& c : cases) worst = std::max(worst, std::abs(c[0] - c[1]));

  std::mt19937_64 rng(4004);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  int broken = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial % 11);
    const std::size_t k = 2 + static_cast<std::size_t>(trial % 3);
    const PainMatrix p = pm(oracle::random_pain(rng, n, 0.5, trial % 2 == 0));
    Matrix c(n, k);
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t ch = 0; ch < k; ++ch) s += (c(i, ch) = u(rng));
      for (std::size_t ch = 0; ch < k; ++ch) c(i, ch) /= s;
    }
    std::vector<std::size_t> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Matrix permuted(n, k);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t ch = 0; ch < k; ++ch) permuted(i, perm[ch]) = c(i, ch);
    const ChannelAllocation a(c, AllocationMode::soft);
    const ChannelAllocation b(permuted, AllocationMode::soft);
    if (total_pain(p, a) != total_pain(p, b)) ++broken;
    if (total_pain(p, harden(a)) != total_pain(p, harden(b))) ++broken;
  }
  return {worst <= kIdentityTol && broken == 0,
          fmt("hand cases max error %.1e; relabeling changed %d of 50 pairs", worst, broken)};
}

// 5
Outcome estimation_chain() {
  double worst = 0.0;
  bool slots_ok = true;
  int fixtures = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    SynthConfig cfg;
    cfg.seed = seed;
    if (seed % 2 == 1) {
      cfg.n_homes = 20;
      cfg.layout = {Layout::Kind::grid, 4, 5};
    }
    const SynthData d = generate(cfg);
    for (int day = 0; day < cfg.n_train_days + cfg.n_test_days; ++day) {
      EstimationConfig e = cfg.truth_estimation;
      e.n_days = 1;
      e.first_day = cfg.first_day + std::chrono::days(day);
      const Estimate est =
          estimate(d.days[static_cast<std::size_t>(day)], d.scans, d.macmap, d.neighborhood, e);
      for (std::size_t q = 0; q < est.p.values().data().size(); ++q)
        worst = std::max(worst, std::abs(est.p.values().data()[q] -
                                         d.ground_truth.values().data()[q]));
      ++fixtures;
    }
    for (int n_d = 1; n_d <= cfg.n_train_days; ++n_d) {
      std::vector<UsageSample> all;
      for (int day = 0; day < n_d; ++day)
        all.insert(all.end(), d.days[static_cast<std::size_t>(day)].begin(),
                   d.days[static_cast<std::size_t>(day)].end());
      const UsageSeries s = build_usage_series(all, EstimationConfig{}, d.neighborhood);
      if (s.values.cols() != static_cast<std::size_t>(3 * n_d) ||
          s.values.rows() != d.neighborhood.size())
        slots_ok = false;
    }
  }
  return {worst <= kEstimationTol && slots_ok,
          fmt("%d noise-free days, max |P - P_true| %.1e; evening slots %s", fixtures, worst,
              slots_ok ? "3*n_d" : "WRONG")};
}

// 6
Outcome soft_hard(const std::vector<AnnealInstance>& runs) {
  int bad = 0;
  double worst = 0.0;
  for (const auto& r : runs) {
    const double hard = r.report.objective;
    const double gap = std::abs(*r.report.soft_objective_final - hard);
    worst = std::max(worst, gap / (1.0 + hard));
    if (gap > kSoftHardTol * (1.0 + hard)) ++bad;
  }
  return {bad == 0, fmt("%d of %zu over limit; worst gap/(1+hard) %.2e (limit %.0e)", bad,
                        runs.size(), worst, kSoftHardTol)};
}

// 7
Outcome generalization_trend() {
  const int seeds = 20;
  double anneal_four = 0.0, anneal_one = 0.0, bnb_four = 0.0, bnb_one = 0.0;
  for (int seed = 0; seed < seeds; ++seed) {
    SynthConfig cfg;
    cfg.n_homes = 20;
    cfg.layout = {Layout::Kind::grid, 4, 5};
    cfg.day_noise_sigma = 0.5;
    cfg.n_train_days = 4;
    cfg.n_test_days = 1;
    cfg.seed = static_cast<std::uint64_t>(seed);
    const SynthData d = generate(cfg);

    auto run = [&](int first_train) {
      ExperimentInputs in{.neighborhood = d.neighborhood};
      for (int day = first_train; day < 4; ++day)
        in.train_days.push_back(d.days[static_cast<std::size_t>(day)]);
      in.test_days.push_back(d.days[4]);
      in.scans = d.scans;
      in.macmap = d.macmap;
      in.solvers = {{"anneal", "anneal", Json{{"restarts", 5}}}, {"bnb", "bnb", Json::object()}};
      in.seed = static_cast<std::uint64_t>(seed);
      return run_experiment(in);
    };
    const ExperimentReport four = run(0);
    const ExperimentReport one = run(3);  // most recent train day only
    anneal_four += four.outcome("anneal").test_pain / seeds;
    anneal_one += one.outcome("anneal").test_pain / seeds;
    bnb_four += four.outcome("bnb").test_pain / seeds;
    bnb_one += one.outcome("bnb").test_pain / seeds;
  }
  return {anneal_four <= anneal_one && bnb_four <= bnb_one,
          fmt("mean test pain over %d seeds: anneal 4-day %.3f vs 1-day %.3f; "
              "bnb 4-day %.3f vs 1-day %.3f",
              seeds, anneal_four, anneal_one, bnb_four, bnb_one)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// 8
Outcome determinism() {
  const fs::path dir = fs::temp_directory_path() / "wifipain_acceptance";
  fs::remove_all(dir);
  SynthConfig cfg;
  cfg.n_homes = 12;
  cfg.layout = {Layout::Kind::grid, 3, 4};
  cfg.day_noise_sigma = 0.5;
  cfg.seed = 8;
  const SynthData d = generate(cfg);
  write_synth(dir, d);
  const Json spec{{"train_usage", {usage_day_filename(0), usage_day_filename(1),
                                   usage_day_filename(2), usage_day_filename(3)}},
                  {"test_usage", {usage_day_filename(4)}},
                  {"scans", "scans.csv"},
                  {"macmap", "macmap.csv"},
                  {"solvers", {"anneal", "bnb", "cd"}},
                  {"seed", 8}};
  write_json_file(dir / "experiment.json", spec);

  auto in_process = [&] {
    return to_json(run_experiment(load_inputs(load_experiment_spec(dir / "experiment.json"))))
        .dump(2);
  };
  const std::string a = in_process();
  const std::string b = in_process();

  auto cli = [&](const std::string& name) {
    const std::string cmd = std::string("\"") + WIFIPAIN_CLI + "\" pipeline --spec \"" +
                            (dir / "experiment.json").string() + "\" --out \"" +
                            (dir / name).string() + "\" > /dev/null";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) && WEXITSTATUS(status) == 0;
  };
  const bool ran = cli("r1.json") && cli("r2.json");
  const bool cli_same = ran && slurp(dir / "r1.json") == slurp(dir / "r2.json");
  fs::remove_all(dir);
  return {a == b && cli_same,
          fmt("in-process reports %s; CLI reports %s", a == b ? "identical" : "DIFFER",
              !ran ? "FAILED TO RUN" : cli_same ? "identical" : "DIFFER")};
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int id, const char* name, const Outcome& o) {
    std::printf("%s %d %s: %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  };

  report(1, "oracle-equivalence", oracle_equivalence());
  const auto t0 = std::chrono::steady_clock::now();
  const auto runs = anneal_instances();
  const double anneal_secs = seconds_since(t0);
  report(2, "anneal-quality", anneal_quality(runs, anneal_secs));
  report(3, "gradient-check", gradient_check());
  report(4, "exact-identities", exact_identities());
  report(5, "estimation-chain", estimation_chain());
  report(6, "soft-hard-consistency", soft_hard(runs));
  report(7, "generalization-trend", generalization_trend());
  report(8, "determinism", determinism());
  return failures == 0 ? 0 : 1;
}
