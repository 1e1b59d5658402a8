#pragma once

#include <cstdint>
#include <vector>

#include "wifipain/json_io.hpp"
#include "wifipain/matrix.hpp"
#include "wifipain/pain.hpp"
#include "wifipain/report.hpp"

namespace wifipain {

// Softmax-relaxed channel allocation trained by Adam on the soft total pain
// while the inverse temperature beta is raised phase by phase.
struct AnnealConfig {
  std::vector<double> beta_schedule{1.0, 10.0, 100.0, 1000.0};
  int steps_per_phase = 6400;
  double learning_rate = 0.001;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  double l2_lambda = 0.0;
  int restarts = 1;
  std::uint64_t seed = 0;
  /// Record the soft pain every `trace_stride` steps; 0 disables the trace.
  int trace_stride = 100;

  void validate() const;
};

AnnealConfig anneal_config_from_json(const Json& doc, AnnealConfig base = {});
Json to_json(const AnnealConfig& cfg);

/// Unconstrained parameters W, one row per home, one column per channel.
class SolverWeights {
 public:
  explicit SolverWeights(Matrix w);

  [[nodiscard]] const Matrix& values() const noexcept { return w_; }
  [[nodiscard]] std::size_t homes() const noexcept { return w_.rows(); }
  [[nodiscard]] std::size_t channels() const noexcept { return w_.cols(); }

 private:
  Matrix w_;
};

/// Row softmax of beta * W, max-shifted so large beta cannot overflow.
ChannelAllocation soft_allocation(const SolverWeights& w, double beta);

/// Tr(C^T P C) for C = soft_allocation(w, beta), plus l2_lambda * ||W||^2.
double soft_pain(const PainMatrix& p, const SolverWeights& w, double beta,
                 double l2_lambda);

/// d soft_pain / d W.
Matrix loss_gradient(const PainMatrix& p, const SolverWeights& w, double beta,
                     double l2_lambda);

SolverReport solve_anneal(const PainMatrix& p, int num_channels,
                          const AnnealConfig& cfg);

}  // namespace wifipain
