#pragma once

#include <cstddef>
#include <deque>
#include <span>
#include <vector>

namespace trackmon {

// Dense 2-D correlation grid produced by the tracker, row-major, values in
// [0, 1]. At least two cells are required so the spread term of APCE can be
// nonzero.
class ResponseMap {
 public:
  ResponseMap(std::size_t rows, std::size_t cols, std::vector<double> values);

  // Min-max rescales arbitrary finite raw scores into [0, 1] before
  // validating. A constant raw map carries no peak information and maps to
  // all zeros. Rescaling changes peak-correlation semantics, so this is a
  // separate opt-in entry point rather than a constructor default.
  static ResponseMap normalized(std::size_t rows, std::size_t cols,
                                std::vector<double> raw);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return values_.size(); }
  double at(std::size_t i, std::size_t j) const {
    return values_[i * cols_ + j];
  }
  std::span<const double> values() const { return values_; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> values_;
};

/// Peak correlation: the maximum cell value.
double peak_correlation(const ResponseMap& map);

/// Average peak-to-correlation energy: |PC - MC|^2 over the mean squared
/// deviation of all cells from the minimum MC. Zero for a constant map.
double apce(const ResponseMap& map);

// Bounded FIFO of recent raw scores (PC or APCE history) used to normalize
// the current score by its windowed mean. The window covers the most recent
// min(t, sigma) values including the current one.
class WindowedNormalizer {
 public:
  explicit WindowedNormalizer(std::size_t window_size);

  void push(double raw);
  double window_mean() const;
  std::size_t window_size() const { return window_size_; }
  std::size_t size() const { return buffer_.size(); }

 private:
  std::size_t window_size_;
  std::deque<double> buffer_;
};

/// Certainty gain: min(1, pc_now / windowed PC mean). The current value must
/// already be pushed into the normalizer.
double certainty_gain(double pc_now, const WindowedNormalizer& normalizer);

/// Sharpness gain: min(1, apce_now / windowed APCE mean). Same window
/// convention as certainty gain.
double sharpness_gain(double apce_now, const WindowedNormalizer& normalizer);

}  // namespace trackmon
