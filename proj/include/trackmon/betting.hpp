#pragma once

#include <optional>

#include "trackmon/stream.hpp"

namespace trackmon {

enum class BettingStrategy {
  agrapa,      // closed-form rate from windowed mean/variance
  sfogd,       // scale-free online gradient descent on the log-loss
  fixed_rate,  // constant rate, for closed-form tests
};

// Ceiling that keeps every e-process factor 1 + lambda * (epsilon - m)
// strictly positive for m in [0, 1] while never exceeding 1 / (2 epsilon).
// For epsilon >= 1/3 the 1 / (2 epsilon) term binds, so the usual clip range
// is preserved; below that, 1 / (2 epsilon) alone would admit factors <= 0.
double default_lambda_max(double epsilon);

struct BettingConfig {
  BettingStrategy strategy = BettingStrategy::agrapa;
  double epsilon = 0.55;       // tolerance shared with the monitor
  double learning_rate = 0.1;  // SF-OGD step scale (gamma)
  std::optional<double> lambda_max{};  // default: default_lambda_max(epsilon)
  double fixed_lambda = 0.0;           // fixed_rate strategy only

  double resolved_lambda_max() const;
  void validate() const;  // throws std::invalid_argument
};

// Mutable per-stream betting state. The rate for the upcoming frame is a
// function of observed history only; callers alternate next_lambda() and
// observe().
struct BettingState {
  double lambda = 0.0;
  double grad_norm_sq_sum = 0.0;          // SF-OGD denominator accumulator
  std::optional<double> last_observation;  // most recent smoothed metric
  RecencyBuffer history;                   // aGRAPA statistics source

  explicit BettingState(
      std::optional<std::size_t> recency_window = std::nullopt)
      : history(recency_window) {}

  void observe(double m) {
    history.push(m);
    last_observation = m;
  }
};

// lambda = clip((eps - mean) / (var + (eps - mean)^2), 0, lambda_max) over
// the windowed history; 0 on empty history or a vanishing denominator.
double agrapa_update(BettingState& state, const BettingConfig& cfg);

// One normalized gradient step on the last observation's log-loss
// l(m; lambda) = -log(1 + lambda * (eps - m)). The squared gradient is
// accumulated before the division, which bounds the first step by the
// learning rate. A zero gradient leaves both rate and accumulator unchanged.
double sfogd_update(BettingState& state, double m_prev,
                    const BettingConfig& cfg);

// Analytic gradient of the log-loss in lambda.
double log_loss_gradient(double m, double lambda, double epsilon);

// Rate for the upcoming frame, dispatched on cfg.strategy. Predictable: uses
// only what observe() has recorded.
double next_lambda(BettingState& state, const BettingConfig& cfg);

}  // namespace trackmon
