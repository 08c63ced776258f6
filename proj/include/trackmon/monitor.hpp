#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "trackmon/betting.hpp"
#include "trackmon/stream.hpp"

namespace trackmon {

// Parameters of one sequential test. Tolerance and significance are fixed at
// construction; the test is defined for a single hypothesis and level, so
// changing them mid-stream is not supported.
struct MonitorConfig {
  double epsilon = 0.55;  // minimum acceptable expected quality
  double alpha = 0.1;     // significance level; alert threshold is 1 / alpha
  BettingConfig betting{};
  double smoothing_factor = 0.25;  // EMA factor; 1 disables smoothing
  std::optional<std::size_t> recency_window = 10;  // w_E; nullopt = unbounded
  bool halt_on_alert = true;

  void validate() const;  // throws std::invalid_argument
};

// One processed frame of the test.
struct StepEvent {
  std::int64_t t;
  double m_smoothed;
  double lambda;
  double factor;  // 1 + lambda * (epsilon - m_smoothed)
  double x;
  bool alert;  // sticky once the threshold is crossed
};

struct MonitorResult {
  std::optional<std::int64_t> stopping_time;
  std::vector<StepEvent> trajectory;
};

// Trajectory-free result for large ensembles.
struct MonitorSummary {
  std::optional<std::int64_t> stopping_time;
  double final_x = 1.0;  // stopped value when halted on alert
  std::int64_t frames = 0;
};

// The sequential test: multiplies per-frame evidence factors
// 1 + lambda_t * (epsilon - M_t) into a running value X_t starting at 1 and
// alerts the first time X_t reaches 1 / alpha. The betting rate for frame t
// is fixed before the frame's value is seen. Accumulation is done in the log
// domain; the linear value is derived from it.
//
// One monitor owns one stream. Distinct monitors never share state and can
// run on any number of threads.
class Monitor {
 public:
  explicit Monitor(const MonitorConfig& cfg);

  // Feed the raw metric value for the next frame. Throws std::logic_error if
  // the monitor halted after an alert, std::invalid_argument on m outside
  // [0, 1].
  StepEvent step(double m);

  bool alerted() const { return alerted_; }
  bool halted() const { return alerted_ && cfg_.halt_on_alert; }
  std::optional<std::int64_t> stopping_time() const { return stopping_time_; }
  double log_value() const { return log_x_; }
  double value() const;
  double last_lambda() const { return betting_.lambda; }
  std::int64_t frames() const { return t_; }
  const MonitorConfig& config() const { return cfg_; }

 private:
  MonitorConfig cfg_;
  double log_threshold_;
  EmaSmoother smoother_;
  BettingState betting_;
  std::int64_t t_ = 0;
  double log_x_ = 0.0;
  bool alerted_ = false;
  std::optional<std::int64_t> stopping_time_;
};

// Run a fresh monitor over a whole stream. Frame indices must be strictly
// increasing. The trajectory is truncated at the alert when halting is on.
MonitorResult run_monitor(std::span<const MetricSample> stream,
                          const MonitorConfig& cfg);

// Same, without recording the trajectory.
MonitorSummary run_monitor_summary(std::span<const MetricSample> stream,
                                   const MonitorConfig& cfg);

}  // namespace trackmon
