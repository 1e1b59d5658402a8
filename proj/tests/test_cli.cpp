#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "wifipain/json_io.hpp"
#include "wifipain/pain.hpp"

using namespace wifipain;
namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::temp_directory_path() / "wifipain_test_cli";

int run(const std::string& args, const std::string& stdout_name = "stdout.txt") {
  const std::string cmd = std::string("\"") + WIFIPAIN_CLI + "\" " + args + " > \"" +
                          (kWork / stdout_name).string() + "\" 2> \"" +
                          (kWork / "stderr.txt").string() + "\"";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void spit(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

struct Workspace {
  Workspace() {
    fs::remove_all(kWork);
    fs::create_directories(kWork);
    spit(kWork / "synth.json", R"({"n_homes": 8, "day_noise_sigma": 0.0, "seed": 3})");
    REQUIRE(run("synth --config " + q(kWork / "synth.json") + " --out " + q(kWork / "data")) == 0);
  }
  ~Workspace() { fs::remove_all(kWork); }
};

}  // namespace

TEST_CASE("usage errors exit 1") {
  fs::create_directories(kWork);
  CHECK(run("--version") == 0);
  CHECK(slurp(kWork / "stdout.txt").find("wifipain") != std::string::npos);
  CHECK(run("") == 1);
  CHECK(run("solve --bogus") == 1);
  CHECK(run("solve --pain") == 1);
  CHECK(run("frobnicate") == 1);
}

TEST_CASE("synth, estimate, solve and evaluate") {
  Workspace ws;
  const fs::path data = kWork / "data";
  CHECK(fs::exists(data / "experiment.json"));

  // One noise-free day reproduces the ground truth.
  REQUIRE(run("estimate --usage " + q(data / "usage_day_0.csv") + " --scans " +
              q(data / "scans.csv") + " --macmap " + q(data / "macmap.csv") + " --out " +
              q(kWork / "p.json")) == 0);
  CHECK(fs::exists(kWork / "p.U.json"));
  CHECK(fs::exists(kWork / "p.S.json"));
  CHECK(fs::exists(kWork / "p.Sb.json"));
  const PainMatrix p = pain_matrix_from_json(read_json_file(kWork / "p.json"));
  const PainMatrix truth = pain_matrix_from_json(read_json_file(data / "ground_truth_p.json"));
  for (std::size_t k = 0; k < p.values().data().size(); ++k)
    CHECK(std::abs(p.values().data()[k] - truth.values().data()[k]) <= 1e-9);

  // Same seed, same report.
  const std::string solve = "solve --pain " + q(kWork / "p.json") + " --solver anneal --seed 7 --out ";
  REQUIRE(run(solve + q(kWork / "r1.json")) == 0);
  REQUIRE(run(solve + q(kWork / "r2.json")) == 0);
  CHECK(slurp(kWork / "r1.json") == slurp(kWork / "r2.json"));
  const Json report = read_json_file(kWork / "r1.json");
  CHECK(report.at("seed") == 7);

  REQUIRE(run("evaluate --pain " + q(kWork / "p.json") + " --allocation " + q(kWork / "r1.json")) == 0);
  const Json eval = Json::parse(slurp(kWork / "stdout.txt"));
  CHECK(eval.at("total").get<double>() == report.at("objective").get<double>());
  CHECK(eval.at("per_home").size() == 8);

  REQUIRE(run("solve --pain " + q(kWork / "p.json") + " --solver bnb") == 0);
  CHECK(Json::parse(slurp(kWork / "stdout.txt")).get<double>() <=
        report.at("objective").get<double>());
}

TEST_CASE("data and solver errors exit 2 and 3") {
  Workspace ws;
  const fs::path data = kWork / "data";
  spit(kWork / "bad.csv",
       "home_id,timestamp,airtime_pct\n101,2021-08-21T19:00:00-04:00,12\n101,not-a-time,3\n");
  CHECK(run("estimate --usage " + q(kWork / "bad.csv") + " --macmap " + q(data / "macmap.csv") +
            " --out " + q(kWork / "p.json")) == 2);
  const std::string err = slurp(kWork / "stderr.txt");
  CHECK(err.find("bad.csv:3:") != std::string::npos);

  spit(kWork / "unknown.csv", "home_id,timestamp,airtime_pct\n999,2021-08-21T19:00:00-04:00,12\n");
  CHECK(run("estimate --usage " + q(kWork / "unknown.csv") + " --macmap " +
            q(data / "macmap.csv") + " --out " + q(kWork / "p.json")) == 2);
  CHECK(slurp(kWork / "stderr.txt").find("999") != std::string::npos);

  // Header-only scans: nobody senses anybody.
  spit(kWork / "noscans.csv", "scanner_home_id,sensed_mac,snr_db,timestamp\n");
  REQUIRE(run("estimate --usage " + q(data / "usage_day_0.csv") + " --scans " +
              q(kWork / "noscans.csv") + " --macmap " + q(data / "macmap.csv") + " --out " +
              q(kWork / "p0.json")) == 0);
  const PainMatrix p0 = pain_matrix_from_json(read_json_file(kWork / "p0.json"));
  for (double v : p0.values().data()) CHECK(v == 0.0);

  Matrix big(20, 20);
  std::vector<std::string> ids;
  for (int i = 0; i < 20; ++i) ids.push_back("h" + std::to_string(i));
  write_json_file(kWork / "big.json", to_json(PainMatrix(Neighborhood(ids, 2), big)));
  CHECK(run("solve --pain " + q(kWork / "big.json") + " --solver exhaustive") == 3);
  CHECK(slurp(kWork / "stderr.txt").find("bnb") != std::string::npos);
  CHECK(run("solve --pain " + q(kWork / "big.json") + " --solver magic") == 1);

  // An 8-home allocation against a 20-home matrix.
  REQUIRE(run("solve --pain " + q(data / "ground_truth_p.json") + " --solver bnb --out " +
              q(kWork / "r8.json")) == 0);
  CHECK(run("evaluate --pain " + q(kWork / "big.json") + " --allocation " + q(kWork / "r8.json")) == 2);
}

TEST_CASE("pipeline reports are byte-identical") {
  fs::create_directories(kWork);
  spit(kWork / "synth.json", R"({"n_homes": 8, "day_noise_sigma": 0.5, "seed": 12})");
  REQUIRE(run("synth --config " + q(kWork / "synth.json") + " --out " + q(kWork / "noisy")) == 0);
  const fs::path spec = kWork / "noisy" / "experiment.json";
  REQUIRE(run("pipeline --spec " + q(spec) + " --out " + q(kWork / "a.json")) == 0);
  REQUIRE(run("pipeline --spec " + q(spec) + " --out " + q(kWork / "b.json")) == 0);
  CHECK(slurp(kWork / "a.json") == slurp(kWork / "b.json"));
  const Json doc = read_json_file(kWork / "a.json");
  CHECK(doc.at("solvers").size() == 2);
  REQUIRE(run("pipeline --spec " + q(spec)) == 0);
  CHECK(fs::exists(kWork / "noisy" / "report.json"));
  fs::remove_all(kWork);
}
