#include "wifipain/anneal.hpp"

#include <algorithm>
#include <cmath>

#include "wifipain/error.hpp"
#include "wifipain/random.hpp"

namespace wifipain {

namespace {

void check_shapes(const PainMatrix& p, const SolverWeights& w) {
  if (p.size() != w.homes()) {
    throw DimensionError("pain matrix is " + std::to_string(p.size()) + "x" +
                         std::to_string(p.size()) + " but weights are " +
                         std::to_string(w.homes()) + "x" +
                         std::to_string(w.channels()));
  }
}

void softmax_rows(const Matrix& w, double beta, Matrix& out) {
  const std::size_t k = w.cols();
  for (std::size_t i = 0; i < w.rows(); ++i) {
    auto in = w.row(i);
    auto dst = out.row(i);
    const double mx = *std::max_element(in.begin(), in.end());
    double sum = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      dst[c] = std::exp(beta * (in[c] - mx));
      sum += dst[c];
    }
    for (std::size_t c = 0; c < k; ++c) dst[c] /= sum;
  }
}

// Reusable buffers for the training loop: P + P^T is formed once.
class GradientWorkspace {
 public:
  explicit GradientWorkspace(const PainMatrix& p, std::size_t channels)
      : n_(p.size()),
        k_(channels),
        sym_(n_, n_),
        soft_(n_, k_),
        coupling_(n_, k_) {
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) sym_(i, j) = p(i, j) + p(j, i);
  }

  // grad_ik = beta C_ik (G_ik - sum_c C_ic G_ic) + 2 lambda W_ik,
  // with G = (P + P^T) C.
  void gradient(const Matrix& w, double beta, double l2_lambda, Matrix& grad) {
    softmax_rows(w, beta, soft_);
    for (std::size_t i = 0; i < n_; ++i) {
      auto g = coupling_.row(i);
      std::fill(g.begin(), g.end(), 0.0);
      for (std::size_t j = 0; j < n_; ++j) {
        const double s = sym_(i, j);
        if (s == 0.0) continue;
        auto cj = soft_.row(j);
        for (std::size_t c = 0; c < k_; ++c) g[c] += s * cj[c];
      }
    }
    for (std::size_t i = 0; i < n_; ++i) {
      auto ci = soft_.row(i);
      auto g = coupling_.row(i);
      double mean = 0.0;
      for (std::size_t c = 0; c < k_; ++c) mean += ci[c] * g[c];
      for (std::size_t c = 0; c < k_; ++c) {
        grad(i, c) = beta * ci[c] * (g[c] - mean) + 2.0 * l2_lambda * w(i, c);
      }
    }
  }

 private:
  std::size_t n_;
  std::size_t k_;
  Matrix sym_;
  Matrix soft_;
  Matrix coupling_;
};

struct RestartResult {
  ChannelAllocation allocation;
  double objective;
  double soft_objective;
  std::vector<TracePoint> trace;
};

RestartResult run_restart(const PainMatrix& p, std::size_t channels,
                          const AnnealConfig& cfg, int restart) {
  const std::size_t n = p.size();
  Rng rng = make_rng(cfg.seed, static_cast<std::uint64_t>(restart));
  Matrix w(n, channels);
  for (double& v : w.data()) v = standard_normal(rng);

  GradientWorkspace ws(p, channels);
  Matrix grad(n, channels);
  Matrix m(n, channels);
  Matrix v(n, channels);
  std::vector<TracePoint> trace;

  // Adam moments persist across beta phases: one optimizer, one model.
  long t = 0;
  double b1_pow = 1.0;
  double b2_pow = 1.0;
  for (const double beta : cfg.beta_schedule) {
    for (int step = 1; step <= cfg.steps_per_phase; ++step) {
      ws.gradient(w, beta, cfg.l2_lambda, grad);
      ++t;
      b1_pow *= cfg.adam_beta1;
      b2_pow *= cfg.adam_beta2;
      const double step_size = cfg.learning_rate / (1.0 - b1_pow);
      const double v_correction = 1.0 / (1.0 - b2_pow);
      auto wd = w.data();
      auto gd = grad.data();
      auto md = m.data();
      auto vd = v.data();
      for (std::size_t q = 0; q < wd.size(); ++q) {
        md[q] = cfg.adam_beta1 * md[q] + (1.0 - cfg.adam_beta1) * gd[q];
        vd[q] = cfg.adam_beta2 * vd[q] + (1.0 - cfg.adam_beta2) * gd[q] * gd[q];
        wd[q] -= step_size * md[q] /
                 (std::sqrt(vd[q] * v_correction) + cfg.adam_epsilon);
      }
      if (cfg.trace_stride > 0 && step % cfg.trace_stride == 0) {
        trace.push_back({beta, step, soft_pain(p, SolverWeights(w), beta, 0.0)});
      }
    }
  }

  const ChannelAllocation soft =
      soft_allocation(SolverWeights(w), cfg.beta_schedule.back());
  ChannelAllocation hard = harden(soft);
  const double objective = total_pain(p, hard);
  return {std::move(hard), objective, total_pain(p, soft), std::move(trace)};
}

}  // namespace

void AnnealConfig::validate() const {
  if (beta_schedule.empty()) throw DataError("beta_schedule must not be empty");
  for (std::size_t k = 0; k < beta_schedule.size(); ++k) {
    if (!(beta_schedule[k] > 0.0) || !std::isfinite(beta_schedule[k])) {
      throw DataError("beta_schedule entries must be positive");
    }
    if (k > 0 && !(beta_schedule[k] > beta_schedule[k - 1])) {
      throw DataError("beta_schedule must be strictly increasing");
    }
  }
  if (steps_per_phase < 1) throw DataError("steps_per_phase must be >= 1");
  if (!(learning_rate > 0.0)) throw DataError("learning_rate must be > 0");
  if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0) ||
      !(adam_beta2 >= 0.0 && adam_beta2 < 1.0)) {
    throw DataError("Adam moment decay rates must lie in [0, 1)");
  }
  if (!(adam_epsilon > 0.0)) throw DataError("adam_epsilon must be > 0");
  if (!(l2_lambda >= 0.0)) throw DataError("l2_lambda must be >= 0");
  if (restarts < 1) throw DataError("restarts must be >= 1");
  if (trace_stride < 0) throw DataError("trace_stride must be >= 0");
}

AnnealConfig anneal_config_from_json(const Json& doc, AnnealConfig cfg) {
  if (doc.is_null()) return cfg;
  if (!doc.is_object()) throw DataError("anneal config must be a JSON object");
  try {
    for (const auto& [key, value] : doc.items()) {
      if (key == "beta_schedule") {
        cfg.beta_schedule = value.get<std::vector<double>>();
      } else if (key == "steps_per_phase") {
        cfg.steps_per_phase = value.get<int>();
      } else if (key == "learning_rate") {
        cfg.learning_rate = value.get<double>();
      } else if (key == "adam_beta1") {
        cfg.adam_beta1 = value.get<double>();
      } else if (key == "adam_beta2") {
        cfg.adam_beta2 = value.get<double>();
      } else if (key == "adam_epsilon") {
        cfg.adam_epsilon = value.get<double>();
      } else if (key == "l2_lambda") {
        cfg.l2_lambda = value.get<double>();
      } else if (key == "restarts") {
        cfg.restarts = value.get<int>();
      } else if (key == "seed") {
        cfg.seed = value.get<std::uint64_t>();
      } else if (key == "trace_stride") {
        cfg.trace_stride = value.get<int>();
      } else {
        throw DataError("unknown anneal config key '" + key + "'");
      }
    }
  } catch (const Json::exception& e) {
    throw DataError(std::string("bad anneal config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

Json to_json(const AnnealConfig& cfg) {
  return Json{{"beta_schedule", cfg.beta_schedule},
              {"steps_per_phase", cfg.steps_per_phase},
              {"learning_rate", cfg.learning_rate},
              {"adam_beta1", cfg.adam_beta1},
              {"adam_beta2", cfg.adam_beta2},
              {"adam_epsilon", cfg.adam_epsilon},
              {"l2_lambda", cfg.l2_lambda},
              {"restarts", cfg.restarts},
              {"seed", cfg.seed},
              {"trace_stride", cfg.trace_stride}};
}

SolverWeights::SolverWeights(Matrix w) : w_(std::move(w)) {
  for (double v : w_.data()) {
    if (!std::isfinite(v)) throw DataError("solver weights must be finite");
  }
}

ChannelAllocation soft_allocation(const SolverWeights& w, double beta) {
  if (!(beta > 0.0)) throw DataError("beta must be positive");
  Matrix out(w.homes(), w.channels());
  softmax_rows(w.values(), beta, out);
  return {std::move(out), AllocationMode::soft};
}

double soft_pain(const PainMatrix& p, const SolverWeights& w, double beta,
                 double l2_lambda) {
  check_shapes(p, w);
  double penalty = 0.0;
  if (l2_lambda != 0.0) {
    for (double v : w.values().data()) penalty += v * v;
  }
  return total_pain(p, soft_allocation(w, beta)) + l2_lambda * penalty;
}

Matrix loss_gradient(const PainMatrix& p, const SolverWeights& w, double beta,
                     double l2_lambda) {
  check_shapes(p, w);
  if (!(beta > 0.0)) throw DataError("beta must be positive");
  GradientWorkspace ws(p, w.channels());
  Matrix grad(w.homes(), w.channels());
  ws.gradient(w.values(), beta, l2_lambda, grad);
  return grad;
}

SolverReport solve_anneal(const PainMatrix& p, int num_channels,
                          const AnnealConfig& cfg) {
  cfg.validate();
  if (num_channels < 2) throw DataError("need at least 2 channels");
  const auto k = static_cast<std::size_t>(num_channels);

  std::optional<RestartResult> best;
  for (int r = 0; r < cfg.restarts; ++r) {
    RestartResult res = run_restart(p, k, cfg, r);
    if (!best || res.objective < best->objective) best = std::move(res);
  }
  return SolverReport{.solver = "anneal",
                      .allocation = std::move(best->allocation),
                      .objective = best->objective,
                      .soft_objective_final = best->soft_objective,
                      .trace = std::move(best->trace),
                      .restarts_used = cfg.restarts,
                      .seed = cfg.seed,
                      .config = to_json(cfg),
                      .stats = Json::object()};
}

}  // namespace wifipain
