#include "wifipain/exact.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "wifipain/random.hpp"

namespace wifipain {

namespace {

double labeled_cost(const PainMatrix& p, const std::vector<int>& label) {
  const std::size_t n = label.size();
  double cost = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (label[i] == label[j]) cost += p(i, j);
  return cost;
}

void require_channels(int num_channels) {
  if (num_channels < 2) {
    throw DataError("need at least 2 channels, got " + std::to_string(num_channels));
  }
}

class BranchAndBound {
 public:
  BranchAndBound(const PainMatrix& p, int channels, std::uint64_t node_limit)
      : p_(p), k_(channels), limit_(node_limit), n_(p.size()) {
    // Heaviest homes first: row + column mass, then index.
    std::vector<double> mass(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) mass[i] += p(i, j) + p(j, i);
    order_.resize(n_);
    std::iota(order_.begin(), order_.end(), 0);
    std::stable_sort(order_.begin(), order_.end(),
                     [&](std::size_t a, std::size_t b) { return mass[a] > mass[b]; });
    label_.assign(n_, -1);
  }

  void run() { descend(0, 0.0, 0); }

  [[nodiscard]] bool found() const { return !best_label_.empty(); }
  [[nodiscard]] const std::vector<int>& best() const { return best_label_; }
  [[nodiscard]] double best_value() const { return best_value_; }
  [[nodiscard]] std::uint64_t nodes() const { return nodes_; }
  [[nodiscard]] std::uint64_t pruned() const { return pruned_; }

 private:
  // `used` = number of distinct channels among assigned homes. Channels are
  // opened in increasing order, so each partition is visited once.
  void descend(std::size_t depth, double accrued, int used) {
    const std::size_t home = order_[depth];
    const int open = std::min(used + 1, k_);
    for (int c = 0; c < open; ++c) {
      if (++nodes_ > limit_) {
        std::optional<ChannelAllocation> incumbent;
        double objective = best_value_;
        if (found()) {
          incumbent = ChannelAllocation::from_channels(best_label_, k_);
          objective = total_pain(p_, *incumbent);
        }
        throw NodeLimitExceeded(limit_, std::move(incumbent), objective);
      }
      double delta = 0.0;
      for (std::size_t e = 0; e < depth; ++e) {
        const std::size_t other = order_[e];
        if (label_[other] == c) delta += p_(home, other) + p_(other, home);
      }
      const double bound = accrued + delta;
      if (bound >= best_value_) {
        ++pruned_;
        continue;
      }
      label_[home] = c;
      if (depth + 1 == n_) {
        best_value_ = bound;
        best_label_ = label_;
      } else {
        descend(depth + 1, bound, std::max(used, c + 1));
      }
      label_[home] = -1;
    }
  }

  const PainMatrix& p_;
  int k_;
  std::uint64_t limit_;
  std::size_t n_;
  std::vector<std::size_t> order_;
  std::vector<int> label_;
  std::vector<int> best_label_;
  double best_value_ = std::numeric_limits<double>::infinity();
  std::uint64_t nodes_ = 0;
  std::uint64_t pruned_ = 0;
};

}  // namespace

void ExactConfig::validate() const {
  if (max_exhaustive_homes < 1) throw DataError("max_exhaustive_homes must be >= 1");
  if (node_limit < 1) throw DataError("node_limit must be >= 1");
}

ExactConfig exact_config_from_json(const Json& doc, ExactConfig cfg) {
  if (doc.is_null()) return cfg;
  if (!doc.is_object()) throw DataError("exact solver config must be a JSON object");
  try {
    for (const auto& [key, value] : doc.items()) {
      if (key == "max_exhaustive_homes") {
        cfg.max_exhaustive_homes = value.get<int>();
      } else if (key == "fix_first_home") {
        cfg.fix_first_home = value.get<bool>();
      } else if (key == "node_limit") {
        cfg.node_limit = value.get<std::uint64_t>();
      } else {
        throw DataError("unknown exact solver config key '" + key + "'");
      }
    }
  } catch (const Json::exception& e) {
    throw DataError(std::string("bad exact solver config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

Json to_json(const ExactConfig& cfg) {
  return Json{{"max_exhaustive_homes", cfg.max_exhaustive_homes},
              {"fix_first_home", cfg.fix_first_home},
              {"node_limit", cfg.node_limit}};
}

NodeLimitExceeded::NodeLimitExceeded(std::uint64_t nodes,
                                     std::optional<ChannelAllocation> incumbent,
                                     double incumbent_objective)
    : SolverError("branch-and-bound exceeded its node limit of " +
                  std::to_string(nodes) +
                  (incumbent ? "; best objective so far " +
                                   std::to_string(incumbent_objective)
                             : std::string("; no incumbent yet"))),
      incumbent_(std::move(incumbent)),
      objective_(incumbent_objective) {}

SolverReport solve_exhaustive(const PainMatrix& p, int num_channels,
                              const ExactConfig& cfg) {
  cfg.validate();
  require_channels(num_channels);
  const std::size_t n = p.size();
  if (n > static_cast<std::size_t>(cfg.max_exhaustive_homes)) {
    throw SolverError("exhaustive search is limited to " +
                      std::to_string(cfg.max_exhaustive_homes) + " homes (got " +
                      std::to_string(n) + "); use the branch-and-bound solver 'bnb'");
  }

  // Odometer over channel vectors in lexicographic order; only strict
  // improvements replace the incumbent.
  const std::size_t first_free = cfg.fix_first_home ? 1 : 0;
  std::vector<int> label(n, 0);
  std::vector<int> best = label;
  double best_cost = std::numeric_limits<double>::infinity();
  std::uint64_t evaluated = 0;
  auto advance = [&]() {
    for (std::size_t pos = n; pos-- > first_free;) {
      if (++label[pos] < num_channels) return true;
      label[pos] = 0;
    }
    return false;
  };
  do {
    const double cost = labeled_cost(p, label);
    ++evaluated;
    if (cost < best_cost) {
      best_cost = cost;
      best = label;
    }
  } while (advance());

  auto alloc = ChannelAllocation::from_channels(best, num_channels);
  const double objective = total_pain(p, alloc);
  return SolverReport{.solver = "exhaustive",
                      .allocation = std::move(alloc),
                      .objective = objective,
                      .config = to_json(cfg),
                      .stats = Json{{"evaluated", evaluated}}};
}

SolverReport solve_branch_and_bound(const PainMatrix& p, int num_channels,
                                    const ExactConfig& cfg) {
  cfg.validate();
  require_channels(num_channels);
  for (double v : p.values().data()) {
    if (v < 0.0) throw SolverError("branch-and-bound requires a nonnegative P");
  }
  BranchAndBound search(p, num_channels, cfg.node_limit);
  search.run();
  auto alloc = ChannelAllocation::from_channels(search.best(), num_channels);
  const double objective = total_pain(p, alloc);
  return SolverReport{.solver = "bnb",
                      .allocation = std::move(alloc),
                      .objective = objective,
                      .config = to_json(cfg),
                      .stats = Json{{"nodes", search.nodes()},
                                    {"pruned", search.pruned()}}};
}

SolverReport solve_coordinate_descent(const PainMatrix& p, int num_channels,
                                      int restarts, std::uint64_t seed) {
  require_channels(num_channels);
  if (restarts < 1) throw DataError("restarts must be >= 1");
  const std::size_t n = p.size();
  const auto k = static_cast<std::size_t>(num_channels);

  std::optional<ChannelAllocation> best;
  double best_objective = std::numeric_limits<double>::infinity();
  long total_sweeps = 0;
  std::vector<double> marginal(k);
  for (int r = 0; r < restarts; ++r) {
    Rng rng = make_rng(seed, static_cast<std::uint64_t>(r));
    std::vector<int> label(n);
    for (auto& l : label) l = uniform_int(rng, num_channels);

    // A home moves only on a strict drop in its marginal pain.
    constexpr int kMaxSweeps = 1'000'000;
    bool changed = true;
    for (int sweep = 0; changed && sweep < kMaxSweeps; ++sweep) {
      changed = false;
      ++total_sweeps;
      for (std::size_t i = 0; i < n; ++i) {
        std::fill(marginal.begin(), marginal.end(), 0.0);
        for (std::size_t j = 0; j < n; ++j) {
          if (j == i) continue;
          marginal[static_cast<std::size_t>(label[j])] += p(i, j) + p(j, i);
        }
        const auto pick = static_cast<int>(
            std::min_element(marginal.begin(), marginal.end()) - marginal.begin());
        if (marginal[static_cast<std::size_t>(pick)] <
            marginal[static_cast<std::size_t>(label[i])]) {
          label[i] = pick;
          changed = true;
        }
      }
    }
    auto alloc = ChannelAllocation::from_channels(label, num_channels);
    const double objective = total_pain(p, alloc);
    if (objective < best_objective) {
      best_objective = objective;
      best = std::move(alloc);
    }
  }
  return SolverReport{.solver = "cd",
                      .allocation = std::move(*best),
                      .objective = best_objective,
                      .restarts_used = restarts,
                      .seed = seed,
                      .config = Json{{"restarts", restarts}, {"seed", seed}},
                      .stats = Json{{"sweeps", total_sweeps}}};
}

}  // namespace wifipain
