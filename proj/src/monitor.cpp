#include "trackmon/monitor.hpp"

#include <cmath>
#include <stdexcept>

namespace trackmon {

void MonitorConfig::validate() const {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw std::invalid_argument("MonitorConfig: epsilon must be in (0, 1)");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("MonitorConfig: alpha must be in (0, 1)");
  }
  if (!(smoothing_factor > 0.0 && smoothing_factor <= 1.0)) {
    throw std::invalid_argument(
        "MonitorConfig: smoothing factor must be in (0, 1]");
  }
  if (recency_window && *recency_window < 1) {
    throw std::invalid_argument("MonitorConfig: recency window must be >= 1");
  }
  if (betting.epsilon != epsilon) {
    throw std::invalid_argument(
        "MonitorConfig: betting.epsilon must match the monitor tolerance");
  }
  betting.validate();
}

Monitor::Monitor(const MonitorConfig& cfg)
    : cfg_(cfg),
      log_threshold_(-std::log(cfg.alpha)),
      smoother_(cfg.smoothing_factor),
      betting_(cfg.recency_window) {
  cfg_.validate();
}

double Monitor::value() const { return std::exp(log_x_); }

StepEvent Monitor::step(double m) {
  if (halted()) {
    throw std::logic_error("Monitor::step: halted after alert");
  }
  if (!(m >= 0.0 && m <= 1.0)) {
    throw std::invalid_argument("Monitor::step: metric value outside [0, 1]");
  }

  // Rate first: lambda_t may depend only on frames 1..t-1.
  const double lambda = next_lambda(betting_, cfg_.betting);
  const double ms = smoother_.smooth(m);
  const double factor = 1.0 + lambda * (cfg_.epsilon - ms);
  if (!(factor > 0.0)) {
    // Unreachable when lambda_max keeps factors positive; a non-positive
    // factor invalidates the process and must never be clamped over.
    throw std::logic_error("Monitor::step: non-positive e-process factor");
  }

  ++t_;
  log_x_ += std::log(factor);
  betting_.observe(ms);

  if (!alerted_ && log_x_ >= log_threshold_) {
    alerted_ = true;
    stopping_time_ = t_;
  }
  return StepEvent{t_, ms, lambda, factor, value(), alerted_};
}

namespace {

void check_frame_order(std::span<const MetricSample> stream) {
  std::int64_t prev = 0;
  for (const MetricSample& s : stream) {
    if (s.t <= prev) {
      throw std::invalid_argument(
          "run_monitor: frame indices must be strictly increasing");
    }
    prev = s.t;
  }
}

}  // namespace

MonitorResult run_monitor(std::span<const MetricSample> stream,
                          const MonitorConfig& cfg) {
  check_frame_order(stream);
  Monitor monitor(cfg);
  MonitorResult result;
  result.trajectory.reserve(stream.size());
  for (const MetricSample& s : stream) {
    result.trajectory.push_back(monitor.step(s.value));
    if (monitor.halted()) break;
  }
  result.stopping_time = monitor.stopping_time();
  return result;
}

MonitorSummary run_monitor_summary(std::span<const MetricSample> stream,
                                   const MonitorConfig& cfg) {
  check_frame_order(stream);
  Monitor monitor(cfg);
  for (const MetricSample& s : stream) {
    monitor.step(s.value);
    if (monitor.halted()) break;
  }
  return MonitorSummary{monitor.stopping_time(), monitor.value(),
                        monitor.frames()};
}

}  // namespace trackmon
