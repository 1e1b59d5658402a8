#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wifipain/json_io.hpp"
#include "wifipain/pain.hpp"
#include "wifipain/report.hpp"

namespace wifipain {

/// "anneal", "exhaustive", "bnb", "cd".
const std::vector<std::string>& solver_names();

/// Dispatches by name. `config` holds solver-specific keys (see the config
/// parsers of each solver; "cd" takes {"restarts": r}). `seed` overrides any
/// seed in `config`.
SolverReport run_solver(const std::string& name, const PainMatrix& p,
                        int num_channels, const Json& config, std::uint64_t seed);

}  // namespace wifipain
