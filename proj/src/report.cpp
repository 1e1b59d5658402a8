#include "wifipain/report.hpp"

#include "wifipain/random.hpp"

namespace wifipain {

Json to_json(const SolverReport& report, const Neighborhood& hood) {
  Json trace = Json::array();
  for (const auto& t : report.trace) trace.push_back({t.beta, t.step, t.soft_pain});
  Json doc{{"solver", report.solver},
           {"allocation", to_json(hood, report.allocation)},
           {"objective", report.objective},
           {"trace", std::move(trace)},
           {"restarts_used", report.restarts_used},
           {"seed", report.seed},
           {"rng", kRngDescription},
           {"config", report.config},
           {"stats", report.stats}};
  doc["soft_objective_final"] =
      report.soft_objective_final ? Json(*report.soft_objective_final) : Json();
  return doc;
}

}  // namespace wifipain
