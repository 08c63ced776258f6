#include "trackmon/response.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace trackmon {

ResponseMap::ResponseMap(std::size_t rows, std::size_t cols,
                         std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (rows_ < 1 || cols_ < 1 || rows_ * cols_ < 2) {
    throw std::invalid_argument("ResponseMap: need at least two cells");
  }
  if (values_.size() != rows_ * cols_) {
    throw std::invalid_argument("ResponseMap: value count != rows * cols");
  }
  for (double v : values_) {
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
      throw std::invalid_argument("ResponseMap: values must be in [0, 1]");
    }
  }
}

ResponseMap ResponseMap::normalized(std::size_t rows, std::size_t cols,
                                    std::vector<double> raw) {
  for (double v : raw) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("ResponseMap: raw values must be finite");
    }
  }
  if (!raw.empty()) {
    const auto [lo_it, hi_it] = std::minmax_element(raw.begin(), raw.end());
    const double lo = *lo_it, hi = *hi_it;
    if (hi > lo) {
      for (double& v : raw) v = (v - lo) / (hi - lo);
    } else {
      std::fill(raw.begin(), raw.end(), 0.0);
    }
  }
  return ResponseMap(rows, cols, std::move(raw));
}

double peak_correlation(const ResponseMap& map) {
  return *std::max_element(map.values().begin(), map.values().end());
}

double apce(const ResponseMap& map) {
  const auto vals = map.values();
  const auto [lo_it, hi_it] = std::minmax_element(vals.begin(), vals.end());
  const double mc = *lo_it;
  const double pc = *hi_it;
  if (pc == mc) return 0.0;  // constant map: maximally uninformative
  double sq = 0.0;
  for (double v : vals) {
    const double d = v - mc;
    sq += d * d;
  }
  const double mean_sq = sq / static_cast<double>(vals.size());
  return (pc - mc) * (pc - mc) / mean_sq;
}

WindowedNormalizer::WindowedNormalizer(std::size_t window_size)
    : window_size_(window_size) {
  if (window_size_ < 1) {
    throw std::invalid_argument("WindowedNormalizer: window size must be >= 1");
  }
}

void WindowedNormalizer::push(double raw) {
  if (!std::isfinite(raw) || raw < 0.0) {
    throw std::invalid_argument(
        "WindowedNormalizer: scores must be finite and non-negative");
  }
  buffer_.push_back(raw);
  if (buffer_.size() > window_size_) buffer_.pop_front();
}

double WindowedNormalizer::window_mean() const {
  if (buffer_.empty()) return 0.0;
  double sum = 0.0;
  for (double v : buffer_) sum += v;
  return sum / static_cast<double>(buffer_.size());
}

namespace {

double windowed_gain(double now, const WindowedNormalizer& normalizer,
                     const char* what) {
  const double mean = normalizer.window_mean();
  if (mean == 0.0) {
    if (now == 0.0) return 1.0;  // no change in certainty
    // A positive current value with a zero window mean means the value was
    // never pushed; the window is required to contain it.
    throw std::logic_error(std::string(what) +
                           ": current value missing from the window");
  }
  return std::min(1.0, now / mean);
}

}  // namespace

double certainty_gain(double pc_now, const WindowedNormalizer& normalizer) {
  return windowed_gain(pc_now, normalizer, "certainty_gain");
}

double sharpness_gain(double apce_now, const WindowedNormalizer& normalizer) {
  return windowed_gain(apce_now, normalizer, "sharpness_gain");
}

}  // namespace trackmon
