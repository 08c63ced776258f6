#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "trackmon/betting.hpp"
#include "trackmon/monitor.hpp"
#include "trackmon/rng.hpp"
#include "trackmon/simulator.hpp"

using trackmon::agrapa_update;
using trackmon::BettingConfig;
using trackmon::BettingState;
using trackmon::BettingStrategy;
using trackmon::default_lambda_max;
using trackmon::log_loss_gradient;
using trackmon::sfogd_update;

TEST_CASE("default clip ceiling") {
  // 1 / (2 eps) binds for the tolerances in common use.
  CHECK(default_lambda_max(0.55) == doctest::Approx(1.0 / 1.1).epsilon(1e-12));
  CHECK(default_lambda_max(0.5) == doctest::Approx(1.0));
  // For small eps the positivity term binds instead.
  CHECK(default_lambda_max(0.1) == doctest::Approx(0.999 / 0.9).epsilon(1e-12));
  CHECK(default_lambda_max(0.1) < 1.0 / 0.2);
}

TEST_CASE("agrapa worked examples") {
  BettingConfig cfg;
  cfg.epsilon = 0.55;

  SUBCASE("history mean above tolerance clips to zero") {
    BettingState state;
    state.observe(0.5);
    state.observe(0.7);
    // raw value is (0.55 - 0.6) / (0.01 + 0.0025) = -4
    CHECK(agrapa_update(state, cfg) == 0.0);
  }
  SUBCASE("strong signal clips to lambda_max") {
    BettingState state;
    state.observe(0.3);
    state.observe(0.5);
    // raw value is 0.15 / 0.0325 ~= 4.615
    CHECK(agrapa_update(state, cfg) ==
          doctest::Approx(1.0 / 1.1).epsilon(1e-12));
  }
  SUBCASE("empty history bets nothing") {
    BettingState state;
    CHECK(agrapa_update(state, cfg) == 0.0);
  }
}

TEST_CASE("agrapa sign behavior") {
  trackmon::Rng rng(23);
  BettingConfig cfg;
  cfg.epsilon = 0.55;
  for (int rep = 0; rep < 200; ++rep) {
    BettingState state;
    const int n = 1 + static_cast<int>(rng.uniform(0.0, 20.0));
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      const double v = rng.uniform01();
      state.observe(v);
      sum += v;
    }
    const double lambda = agrapa_update(state, cfg);
    if (sum / n >= cfg.epsilon) {
      CHECK(lambda == 0.0);
    } else {
      CHECK(lambda > 0.0);
    }
  }
}

TEST_CASE("sfogd worked example") {
  BettingConfig cfg;
  cfg.epsilon = 0.55;
  cfg.learning_rate = 0.1;
  BettingState state;
  state.lambda = 0.5;
  // g = -0.2 / 1.1; the fresh accumulator normalizes the step to gamma.
  CHECK(sfogd_update(state, 0.35, cfg) == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(state.grad_norm_sq_sum ==
        doctest::Approx((0.2 / 1.1) * (0.2 / 1.1)).epsilon(1e-12));
}

TEST_CASE("sfogd first step magnitude is exactly the learning rate") {
  trackmon::Rng rng(31);
  for (int rep = 0; rep < 100; ++rep) {
    BettingConfig cfg;
    cfg.epsilon = rng.uniform(0.2, 0.8);
    cfg.learning_rate = rng.uniform(0.01, 0.5);
    BettingState state;
    state.lambda = rng.uniform(0.0, 0.5);
    const double before = state.lambda;
    double m = rng.uniform01();
    if (m == cfg.epsilon) m += 0.01;
    const double after = sfogd_update(state, m, cfg);
    const double unclipped =
        before + (m > cfg.epsilon ? -cfg.learning_rate : cfg.learning_rate);
    CHECK(after == doctest::Approx(std::clamp(
                       unclipped, 0.0, cfg.resolved_lambda_max()))
                       .epsilon(1e-12));
  }
}

TEST_CASE("sfogd zero gradient leaves state untouched") {
  BettingConfig cfg;
  cfg.epsilon = 0.55;
  BettingState state;
  state.lambda = 0.3;
  state.grad_norm_sq_sum = 0.25;
  CHECK(sfogd_update(state, 0.55, cfg) == 0.3);
  CHECK(state.grad_norm_sq_sum == 0.25);
}

TEST_CASE("sfogd clips into [0, lambda_max]") {
  BettingConfig cfg;
  cfg.epsilon = 0.55;
  cfg.learning_rate = 50.0;  // force the clip on the first step
  BettingState state;
  state.lambda = 0.5;
  CHECK(sfogd_update(state, 0.0, cfg) == cfg.resolved_lambda_max());
  BettingState down;
  down.lambda = 0.5;
  CHECK(sfogd_update(down, 1.0, cfg) == 0.0);
}

TEST_CASE("analytic gradient matches central finite differences") {
  trackmon::Rng rng(47);
  int checked = 0;
  const double h = 3e-5;
  while (checked < 2000) {
    const double eps = rng.uniform(0.05, 0.95);
    const double m = rng.uniform01();
    const double lambda = rng.uniform(0.0, 1.0 / (2.0 * eps));
    const double d = eps - m;
    if (1.0 + lambda * d <= 0.05) continue;
    if (std::abs(d) < 1e-3) continue;  // ill-conditioned for relative error
    ++checked;
    auto loss = [&](double l) { return -std::log1p(l * d); };
    const double fd = (loss(lambda + h) - loss(lambda - h)) / (2.0 * h);
    const double g = log_loss_gradient(m, lambda, eps);
    CHECK(std::abs(g - fd) / std::max(std::abs(g), 1e-12) < 1e-6);
  }
}

TEST_CASE("rate sequence is predictable") {
  // Two streams share a prefix and then diverge; every rate up to and
  // including the divergence frame must be bit-identical, because the rate
  // for frame t is fixed before the frame's value is seen.
  using trackmon::MetricSample;
  trackmon::StreamSpec spec;
  spec.length = 60;
  spec.null_mean = 0.6;
  spec.null_spread = 0.3;
  spec.seed = 99;
  auto stream_a = trackmon::generate_stream(spec);
  auto stream_b = stream_a;
  const std::size_t k = 40;  // 0-based index of the diverging frame
  stream_b[k].value = stream_a[k].value < 0.5 ? 0.9 : 0.1;

  for (auto strategy : {BettingStrategy::agrapa, BettingStrategy::sfogd}) {
    trackmon::MonitorConfig cfg;
    cfg.betting.strategy = strategy;
    const auto run_a = trackmon::run_monitor(stream_a, cfg);
    const auto run_b = trackmon::run_monitor(stream_b, cfg);
    for (std::size_t i = 0; i <= k; ++i) {
      CHECK(run_a.trajectory[i].lambda == run_b.trajectory[i].lambda);
    }
    // The divergence is real: the smoothed inputs differ from frame k on.
    CHECK(run_a.trajectory[k].m_smoothed != run_b.trajectory[k].m_smoothed);
  }
}

TEST_CASE("config validation") {
  BettingConfig cfg;
  cfg.epsilon = 1.2;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.epsilon = 0.55;
  cfg.lambda_max = 2.0;  // above 1 / (2 eps)
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.lambda_max.reset();
  cfg.strategy = BettingStrategy::fixed_rate;
  cfg.fixed_lambda = 5.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.fixed_lambda = 0.5;
  CHECK_NOTHROW(cfg.validate());
}
