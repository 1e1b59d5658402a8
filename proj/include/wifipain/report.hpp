#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wifipain/json_io.hpp"
#include "wifipain/pain.hpp"

namespace wifipain {

struct TracePoint {
  double beta = 0.0;
  int step = 0;  // 1-based within the phase
  double soft_pain = 0.0;
};

/// Result of any solver. `objective` is always total_pain(P, allocation)
/// recomputed after the search, never a value carried out of the loop.
struct SolverReport {
  std::string solver;
  ChannelAllocation allocation;
  double objective = 0.0;
  std::optional<double> soft_objective_final{};
  std::vector<TracePoint> trace{};
  int restarts_used = 1;
  std::uint64_t seed = 0;
  Json config = Json::object();
  Json stats = Json::object();
};

Json to_json(const SolverReport& report, const Neighborhood& hood);

}  // namespace wifipain
