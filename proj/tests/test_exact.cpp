#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "oracles.hpp"
#include "wifipain/error.hpp"
#include "wifipain/exact.hpp"
#include "wifipain/solvers.hpp"

using namespace wifipain;

namespace {

PainMatrix pm(Matrix m, int k = 2) { return oracle::make_pain(m, k); }

Matrix ring(std::size_t n) {
  Matrix p(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    p(i, (i + 1) % n) = 1.0;
    p((i + 1) % n, i) = 1.0;
  }
  return p;
}

}  // namespace

TEST_CASE("exhaustive examples") {
  const auto split = solve_exhaustive(pm(Matrix{{0, 5}, {5, 0}}), 2);
  CHECK(split.objective == 0.0);
  CHECK(split.allocation.channel_of_home() == std::vector<int>{0, 1});

  const Matrix ones{{0, 1, 1}, {1, 0, 1}, {1, 1, 0}};
  const auto triangle = solve_exhaustive(pm(ones), 2);
  CHECK(triangle.objective == 2.0);
  // Lexicographically smallest optimum with home 0 pinned.
  CHECK(triangle.allocation.channel_of_home() == std::vector<int>{0, 0, 1});
  CHECK(solve_exhaustive(pm(ones, 3), 3).objective == 0.0);

  const auto zero = solve_exhaustive(pm(Matrix(4, 4)), 2);
  CHECK(zero.objective == 0.0);
  CHECK(zero.allocation.channel_of_home() == std::vector<int>{0, 0, 0, 0});

  // 2^(n-1) labelings with home 0 pinned.
  CHECK(solve_exhaustive(pm(Matrix(5, 5)), 2).stats.at("evaluated") == 16);
  ExactConfig all;
  all.fix_first_home = false;
  CHECK(solve_exhaustive(pm(Matrix(5, 5)), 2, all).stats.at("evaluated") == 32);
}

TEST_CASE("exhaustive refuses oversized neighborhoods") {
  ExactConfig cfg;
  cfg.max_exhaustive_homes = 4;
  try {
    solve_exhaustive(pm(Matrix(5, 5)), 2, cfg);
    FAIL("expected SolverError");
  } catch (const SolverError& e) {
    CHECK(std::string(e.what()).find("bnb") != std::string::npos);
  }
}

TEST_CASE("exhaustive and branch-and-bound reach the brute-force optimum") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + trial % 9;
    const int k = 2 + trial % 2;
    const Matrix m = oracle::random_pain(rng, n, 0.5, trial % 2 == 0);
    const PainMatrix p = pm(m, k);
    const double truth = oracle::brute_force_optimum(m, k);
    const auto ex = solve_exhaustive(p, k);
    const auto bb = solve_branch_and_bound(p, k);
    CHECK(ex.objective == doctest::Approx(truth).epsilon(1e-12));
    CHECK(bb.objective == ex.objective);
    CHECK(bb.objective == total_pain(p, bb.allocation));
  }
}

TEST_CASE("branch-and-bound matches exhaustive up to 12 homes") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 10 + trial % 3;
    const int k = 2 + trial % 2;
    const PainMatrix p = pm(oracle::random_pain(rng, n, 0.5, trial % 2 == 1), k);
    const auto bb = solve_branch_and_bound(p, k);
    CHECK(bb.objective == solve_exhaustive(p, k).objective);
    CHECK(bb.stats.at("nodes").get<std::uint64_t>() > 0);
  }
}

TEST_CASE("branch-and-bound node limit carries the incumbent") {
  std::mt19937_64 rng(9);
  const PainMatrix p = pm(oracle::random_pain(rng, 12, 0.9, true), 3);
  ExactConfig cfg;
  cfg.node_limit = 50;
  try {
    solve_branch_and_bound(p, 3, cfg);
    FAIL("expected NodeLimitExceeded");
  } catch (const NodeLimitExceeded& e) {
    if (e.incumbent()) {
      CHECK(e.incumbent_objective() == total_pain(p, *e.incumbent()));
    }
  }
  cfg.node_limit = 0;
  CHECK_THROWS_AS(solve_branch_and_bound(p, 3, cfg), DataError);
}

TEST_CASE("coordinate descent") {
  CHECK(solve_coordinate_descent(pm(ring(6)), 2, 5, 1).objective == 0.0);
  CHECK(solve_coordinate_descent(pm(Matrix{{0, 5}, {5, 0}}), 2, 1, 0).objective == 0.0);
  CHECK(solve_coordinate_descent(pm(Matrix(3, 3)), 2, 1, 0).objective == 0.0);

  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 3 + trial % 6;
    const Matrix m = oracle::random_pain(rng, n, 0.6, trial % 2 == 0);
    const PainMatrix p = pm(m);
    const auto a = solve_coordinate_descent(p, 2, 3, static_cast<std::uint64_t>(trial));
    const auto b = solve_coordinate_descent(p, 2, 3, static_cast<std::uint64_t>(trial));
    CHECK(a.allocation == b.allocation);
    CHECK(a.objective >= oracle::brute_force_optimum(m, 2) - 1e-12);
    CHECK(a.objective == total_pain(p, a.allocation));
    // A local optimum: no single home can move to a better channel.
    auto ch = a.allocation.channel_of_home();
    for (std::size_t i = 0; i < n; ++i) {
      const int own = ch[i];
      ch[i] = 1 - own;
      CHECK(total_pain(p, ChannelAllocation::from_channels(ch, 2)) >= a.objective - 1e-12);
      ch[i] = own;
    }
  }
}

TEST_CASE("solver dispatch") {
  const PainMatrix p = pm(ring(5));
  CHECK(solver_names() == std::vector<std::string>{"anneal", "exhaustive", "bnb", "cd"});
  // Odd ring on two channels: one edge must collide.
  CHECK(run_solver("exhaustive", p, 2, Json::object(), 0).objective == 2.0);
  CHECK(run_solver("bnb", p, 2, Json::object(), 0).objective == 2.0);
  CHECK(run_solver("bnb", p, 3, Json::object(), 0).objective == 0.0);
  const auto cd = run_solver("cd", p, 2, Json{{"restarts", 2}}, 4);
  CHECK(cd.seed == 4);
  CHECK(cd.restarts_used == 2);
  const auto an = run_solver("anneal", p, 2, Json{{"seed", 1}, {"steps_per_phase", 100}}, 8);
  CHECK(an.seed == 8);
  CHECK_THROWS_AS(run_solver("simplex", p, 2, Json::object(), 0), DataError);
  CHECK_THROWS_AS(run_solver("bnb", p, 2, Json{{"bogus", 1}}, 0), DataError);
  CHECK_THROWS_AS(exact_config_from_json(Json{{"max_exhaustive_homes", 0}}), DataError);
}
