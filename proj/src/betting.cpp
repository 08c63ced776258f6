#include "trackmon/betting.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace trackmon {

double default_lambda_max(double epsilon) {
  return std::min(1.0 / (2.0 * epsilon), 0.999 / (1.0 - epsilon));
}

double BettingConfig::resolved_lambda_max() const {
  return lambda_max ? *lambda_max : default_lambda_max(epsilon);
}

void BettingConfig::validate() const {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw std::invalid_argument("BettingConfig: epsilon must be in (0, 1)");
  }
  if (!(learning_rate > 0.0)) {
    throw std::invalid_argument("BettingConfig: learning rate must be > 0");
  }
  const double lmax = resolved_lambda_max();
  if (!(lmax > 0.0 && lmax <= 1.0 / (2.0 * epsilon))) {
    throw std::invalid_argument(
        "BettingConfig: lambda_max must be in (0, 1 / (2 epsilon)]");
  }
  if (strategy == BettingStrategy::fixed_rate &&
      !(fixed_lambda >= 0.0 && fixed_lambda <= lmax)) {
    throw std::invalid_argument(
        "BettingConfig: fixed_lambda must be in [0, lambda_max]");
  }
}

double agrapa_update(BettingState& state, const BettingConfig& cfg) {
  const WindowStats stats = state.history.stats();
  if (stats.count == 0) {
    state.lambda = 0.0;
    return state.lambda;
  }
  const double gap = cfg.epsilon - stats.mean;
  const double denom = stats.variance + gap * gap;
  const double raw = denom > 0.0 ? gap / denom : 0.0;
  state.lambda = std::clamp(raw, 0.0, cfg.resolved_lambda_max());
  return state.lambda;
}

double log_loss_gradient(double m, double lambda, double epsilon) {
  const double gap = epsilon - m;
  return -gap / (1.0 + lambda * gap);
}

double sfogd_update(BettingState& state, double m_prev,
                    const BettingConfig& cfg) {
  const double g = log_loss_gradient(m_prev, state.lambda, cfg.epsilon);
  if (g == 0.0) return state.lambda;
  state.grad_norm_sq_sum += g * g;
  const double step =
      cfg.learning_rate * g / std::sqrt(state.grad_norm_sq_sum);
  state.lambda =
      std::clamp(state.lambda - step, 0.0, cfg.resolved_lambda_max());
  return state.lambda;
}

double next_lambda(BettingState& state, const BettingConfig& cfg) {
  switch (cfg.strategy) {
    case BettingStrategy::agrapa:
      return agrapa_update(state, cfg);
    case BettingStrategy::sfogd:
      if (state.last_observation) {
        return sfogd_update(state, *state.last_observation, cfg);
      }
      return state.lambda;  // nothing observed yet
    case BettingStrategy::fixed_rate:
      state.lambda = cfg.fixed_lambda;
      return state.lambda;
  }
  throw std::logic_error("next_lambda: unknown strategy");
}

}  // namespace trackmon
