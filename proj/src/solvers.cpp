#include "wifipain/solvers.hpp"

#include <algorithm>

#include "wifipain/anneal.hpp"
#include "wifipain/error.hpp"
#include "wifipain/exact.hpp"

namespace wifipain {

const std::vector<std::string>& solver_names() {
  static const std::vector<std::string> names{"anneal", "exhaustive", "bnb", "cd"};
  return names;
}

SolverReport run_solver(const std::string& name, const PainMatrix& p,
                        int num_channels, const Json& config, std::uint64_t seed) {
  if (name == "anneal") {
    AnnealConfig cfg = anneal_config_from_json(config);
    cfg.seed = seed;
    return solve_anneal(p, num_channels, cfg);
  }
  if (name == "exhaustive") {
    return solve_exhaustive(p, num_channels, exact_config_from_json(config));
  }
  if (name == "bnb") {
    return solve_branch_and_bound(p, num_channels, exact_config_from_json(config));
  }
  if (name == "cd") {
    int restarts = 5;
    if (config.is_object()) {
      for (const auto& [key, value] : config.items()) {
        if (key == "restarts") {
          restarts = value.get<int>();
        } else if (key != "seed") {
          throw DataError("unknown cd config key '" + key + "'");
        }
      }
    }
    return solve_coordinate_descent(p, num_channels, restarts, seed);
  }
  throw DataError("unknown solver '" + name + "' (expected anneal, exhaustive, bnb or cd)");
}

}  // namespace wifipain
