#pragma once

#include <cstdint>
#include <cstddef>
#include <deque>
#include <optional>

namespace trackmon {

// One frame of the bounded quality signal. Frame indices are 1-based and
// strictly increasing within a stream.
struct MetricSample {
  std::int64_t t;
  double value;  // in [0, 1]
};

// Exponential moving average over [0, 1] values. The first input initializes
// the state; factor 1 makes the smoother an identity.
class EmaSmoother {
 public:
  explicit EmaSmoother(double factor);

  // Returns the smoothed value and advances the state. Throws on m outside
  // [0, 1].
  double smooth(double m);

  void reset() { state_.reset(); }
  double factor() const { return factor_; }
  std::optional<double> state() const { return state_; }

 private:
  double factor_;
  std::optional<double> state_;
};

struct WindowStats {
  double mean = 0.0;
  double variance = 0.0;  // population convention (divide by count)
  std::size_t count = 0;
};

// FIFO of recent metric values, bounded by a capacity (the recency window
// w_E) or unbounded when no capacity is given.
class RecencyBuffer {
 public:
  explicit RecencyBuffer(std::optional<std::size_t> capacity = std::nullopt);

  void push(double value);
  void clear() { entries_.clear(); }

  // Mean and population variance over the buffered values; all zeros when
  // empty. Recomputed from the buffer so the result depends only on the
  // retained values.
  WindowStats stats() const;

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::optional<std::size_t> capacity() const { return capacity_; }
  const std::deque<double>& values() const { return entries_; }

 private:
  std::optional<std::size_t> capacity_;
  std::deque<double> entries_;
};

}  // namespace trackmon
