#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "trackmon/monitor.hpp"
#include "trackmon/rng.hpp"
#include "trackmon/simulator.hpp"

using trackmon::BettingStrategy;
using trackmon::MetricSample;
using trackmon::Monitor;
using trackmon::MonitorConfig;
using trackmon::run_monitor;
using trackmon::run_monitor_summary;

namespace {

MonitorConfig fixed_rate_config(double lambda, double epsilon = 0.55,
                                double alpha = 0.1) {
  MonitorConfig cfg;
  cfg.epsilon = epsilon;
  cfg.alpha = alpha;
  cfg.smoothing_factor = 1.0;
  cfg.betting.strategy = BettingStrategy::fixed_rate;
  cfg.betting.epsilon = epsilon;
  cfg.betting.fixed_lambda = lambda;
  return cfg;
}

std::vector<MetricSample> constant_stream(std::int64_t n, double value) {
  std::vector<MetricSample> out;
  for (std::int64_t t = 1; t <= n; ++t) out.push_back({t, value});
  return out;
}

}  // namespace

TEST_CASE("fixed-rate closed form: two steps") {
  Monitor monitor(fixed_rate_config(0.5));
  monitor.step(0.2);
  const auto e = monitor.step(0.2);
  // factor 1 + 0.5 * 0.35 = 1.175 per step
  CHECK(e.factor == doctest::Approx(1.175).epsilon(1e-12));
  CHECK(e.x == doctest::Approx(1.380625).epsilon(1e-12));
}

TEST_CASE("fixed-rate closed form: crossing at t = 15") {
  const auto result = run_monitor(constant_stream(50, 0.2),
                                  fixed_rate_config(0.5));
  REQUIRE(result.stopping_time.has_value());
  CHECK(*result.stopping_time == 15);  // smallest t with 1.175^t >= 10
  // Halting truncates the trajectory at the alert.
  CHECK(result.trajectory.size() == 15);
  CHECK(result.trajectory.back().alert);
}

TEST_CASE("zero rate keeps the process at one") {
  const auto result = run_monitor(constant_stream(100, 0.1),
                                  fixed_rate_config(0.0));
  CHECK_FALSE(result.stopping_time.has_value());
  for (const auto& e : result.trajectory) {
    CHECK(e.x == 1.0);
    CHECK(e.factor == 1.0);
  }
}

TEST_CASE("empty stream leaves the monitor untouched") {
  MonitorConfig cfg;
  const auto result = run_monitor({}, cfg);
  CHECK_FALSE(result.stopping_time.has_value());
  CHECK(result.trajectory.empty());
}

TEST_CASE("healthy stream under agrapa never bets") {
  MonitorConfig cfg;  // epsilon 0.55, agrapa
  const auto result = run_monitor(constant_stream(200, 0.9), cfg);
  CHECK_FALSE(result.stopping_time.has_value());
  for (const auto& e : result.trajectory) {
    CHECK(e.lambda == 0.0);
    CHECK(e.x == 1.0);
  }
}

TEST_CASE("factor direction follows the evidence sign") {
  trackmon::StreamSpec spec;
  spec.length = 300;
  spec.null_mean = 0.55;
  spec.null_spread = 0.4;
  spec.seed = 3;
  const auto stream = trackmon::generate_stream(spec);
  MonitorConfig cfg;
  cfg.halt_on_alert = false;
  const auto result = run_monitor(stream, cfg);
  for (const auto& e : result.trajectory) {
    CHECK(e.x >= 0.0);
    if (e.m_smoothed >= cfg.epsilon) {
      CHECK(e.factor <= 1.0);
    }
    if (e.factor > 1.0) {
      CHECK(e.lambda > 0.0);
      CHECK(e.m_smoothed < cfg.epsilon);
    }
  }
}

TEST_CASE("log-domain accumulation matches the direct product") {
  trackmon::StreamSpec spec;
  spec.length = 2000;
  spec.null_mean = 0.5;
  spec.null_spread = 0.3;
  spec.seed = 21;
  const auto stream = trackmon::generate_stream(spec);
  MonitorConfig cfg;
  cfg.halt_on_alert = false;
  for (auto strategy : {BettingStrategy::agrapa, BettingStrategy::sfogd}) {
    cfg.betting.strategy = strategy;
    const auto result = run_monitor(stream, cfg);
    double product = 1.0;
    for (const auto& e : result.trajectory) {
      product *= e.factor;
      CHECK(e.x == doctest::Approx(product).epsilon(1e-9));
    }
  }
}

TEST_CASE("log-domain accumulation stays accurate over very long streams") {
  // Factors close to one keep the direct product representable for 1e5
  // frames, which is what makes the comparison meaningful.
  auto cfg = fixed_rate_config(0.5);
  cfg.halt_on_alert = false;
  Monitor monitor(cfg);
  trackmon::Rng rng(1234);
  double product = 1.0;
  for (int t = 0; t < 100000; ++t) {
    const auto e = monitor.step(rng.uniform(0.54, 0.56));
    product *= e.factor;
  }
  CHECK(monitor.value() == doctest::Approx(product).epsilon(1e-9));
}

TEST_CASE("process and rate stay in range on fuzzed configurations") {
  trackmon::Rng rng(555);
  for (int rep = 0; rep < 30; ++rep) {
    MonitorConfig cfg;
    cfg.epsilon = rng.uniform(0.1, 0.9);
    cfg.alpha = rng.uniform(0.01, 0.3);
    cfg.smoothing_factor = rng.uniform(0.1, 1.0);
    cfg.halt_on_alert = false;
    cfg.betting.epsilon = cfg.epsilon;
    cfg.betting.strategy = rep % 2 == 0 ? BettingStrategy::agrapa
                                        : BettingStrategy::sfogd;
    cfg.betting.learning_rate = rng.uniform(0.01, 0.5);
    const double lambda_max = cfg.betting.resolved_lambda_max();

    Monitor monitor(cfg);
    for (int t = 0; t < 400; ++t) {
      const auto e = monitor.step(rng.uniform01());
      CHECK(e.x >= 0.0);
      CHECK(e.factor > 0.0);
      CHECK(e.lambda >= 0.0);
      CHECK(e.lambda <= lambda_max);
    }
  }
}

TEST_CASE("per-frame e-value form and product form coincide") {
  // X_t can be written either as prod(1 + lambda_i (eps - m_i)) or as the
  // merged e-value form prod((1 - lambda_i) + lambda_i E_i) with
  // E_i = 1 + eps - m_i. Both must produce the same trajectory.
  trackmon::Rng rng(77);
  const double eps = 0.55;
  for (int rep = 0; rep < 100; ++rep) {
    const int n = 50 + static_cast<int>(rng.uniform(0.0, 200.0));
    double prod_direct = 1.0;
    double prod_evalue = 1.0;
    for (int i = 0; i < n; ++i) {
      const double lambda =
          rng.uniform(0.0, trackmon::default_lambda_max(eps));
      const double m = rng.uniform01();
      prod_direct *= 1.0 + lambda * (eps - m);
      const double e_value = 1.0 + eps - m;
      prod_evalue *= (1.0 - lambda) + lambda * e_value;
      CHECK(std::abs(prod_direct - prod_evalue) <=
            1e-12 * std::abs(prod_direct));
    }
  }
}

TEST_CASE("monitor trajectory agrees with the e-value form") {
  trackmon::StreamSpec spec;
  spec.length = 400;
  spec.null_mean = 0.5;
  spec.null_spread = 0.3;
  spec.seed = 13;
  const auto stream = trackmon::generate_stream(spec);
  MonitorConfig cfg;
  cfg.halt_on_alert = false;
  const auto result = run_monitor(stream, cfg);
  double prod = 1.0;
  for (const auto& e : result.trajectory) {
    prod *= (1.0 - e.lambda) + e.lambda * (1.0 + cfg.epsilon - e.m_smoothed);
    CHECK(e.x == doctest::Approx(prod).epsilon(1e-9));
  }
}

TEST_CASE("halting semantics") {
  Monitor monitor(fixed_rate_config(0.5));
  for (int i = 0; i < 15; ++i) monitor.step(0.2);
  CHECK(monitor.alerted());
  CHECK(monitor.halted());
  CHECK_THROWS_AS(monitor.step(0.2), std::logic_error);

  auto cfg = fixed_rate_config(0.5);
  cfg.halt_on_alert = false;
  Monitor keep_going(cfg);
  for (int i = 0; i < 30; ++i) keep_going.step(0.2);
  CHECK(keep_going.alerted());
  CHECK_FALSE(keep_going.halted());
  CHECK(*keep_going.stopping_time() == 15);  // first crossing is sticky
  CHECK(keep_going.frames() == 30);
}

TEST_CASE("input validation") {
  MonitorConfig cfg;
  Monitor monitor(cfg);
  CHECK_THROWS_AS(monitor.step(1.5), std::invalid_argument);
  CHECK_THROWS_AS(monitor.step(-0.1), std::invalid_argument);

  MonitorConfig bad;
  bad.epsilon = 0.6;  // betting config still carries 0.55
  CHECK_THROWS_AS(Monitor{bad}, std::invalid_argument);

  std::vector<MetricSample> unordered{{2, 0.5}, {1, 0.5}};
  CHECK_THROWS_AS(run_monitor(unordered, cfg), std::invalid_argument);
}

TEST_CASE("summary run matches full run") {
  trackmon::StreamSpec spec;
  spec.length = 300;
  spec.null_mean = 0.7;
  spec.null_spread = 0.2;
  spec.failure_at = 150;
  spec.post_failure_mean = 0.1;
  spec.seed = 8;
  const auto stream = trackmon::generate_stream(spec);
  MonitorConfig cfg;
  const auto full = run_monitor(stream, cfg);
  const auto summary = run_monitor_summary(stream, cfg);
  CHECK(full.stopping_time == summary.stopping_time);
  CHECK(full.trajectory.back().x == summary.final_x);
  CHECK(static_cast<std::int64_t>(full.trajectory.size()) == summary.frames);
}
