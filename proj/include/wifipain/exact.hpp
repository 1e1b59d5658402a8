#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "wifipain/error.hpp"
#include "wifipain/json_io.hpp"
#include "wifipain/pain.hpp"
#include "wifipain/report.hpp"

namespace wifipain {

struct ExactConfig {
  int max_exhaustive_homes = 14;
  /// Pin the first home to channel 0 (relabeling symmetry).
  bool fix_first_home = true;
  std::uint64_t node_limit = 100'000'000;

  void validate() const;
};

ExactConfig exact_config_from_json(const Json& doc, ExactConfig base = {});
Json to_json(const ExactConfig& cfg);

/// Branch-and-bound ran out of nodes; carries the best allocation found so far.
class NodeLimitExceeded : public SolverError {
 public:
  NodeLimitExceeded(std::uint64_t nodes, std::optional<ChannelAllocation> incumbent,
                    double incumbent_objective);

  [[nodiscard]] const std::optional<ChannelAllocation>& incumbent() const noexcept {
    return incumbent_;
  }
  [[nodiscard]] double incumbent_objective() const noexcept { return objective_; }

 private:
  std::optional<ChannelAllocation> incumbent_;
  double objective_;
};

/// Enumerates every allocation; the lexicographically smallest minimizer wins.
SolverReport solve_exhaustive(const PainMatrix& p, int num_channels,
                              const ExactConfig& cfg = {});

/// Depth-first search over homes in descending P mass. The bound is the pain
/// accrued among assigned homes. Requires P >= 0.
SolverReport solve_branch_and_bound(const PainMatrix& p, int num_channels,
                                    const ExactConfig& cfg = {});

/// Best-response sweeps from seeded random starts.
SolverReport solve_coordinate_descent(const PainMatrix& p, int num_channels,
                                      int restarts, std::uint64_t seed);

}  // namespace wifipain
