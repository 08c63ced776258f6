#include "trackmon/stream.hpp"

#include <cmath>
#include <stdexcept>

namespace trackmon {

EmaSmoother::EmaSmoother(double factor) : factor_(factor) {
  if (!(factor > 0.0 && factor <= 1.0)) {
    throw std::invalid_argument("EmaSmoother: factor must be in (0, 1]");
  }
}

double EmaSmoother::smooth(double m) {
  if (!(m >= 0.0 && m <= 1.0)) {
    throw std::invalid_argument("EmaSmoother: value outside [0, 1]");
  }
  if (!state_) {
    state_ = m;
  } else {
    state_ = factor_ * m + (1.0 - factor_) * *state_;
  }
  return *state_;
}

RecencyBuffer::RecencyBuffer(std::optional<std::size_t> capacity)
    : capacity_(capacity) {
  if (capacity_ && *capacity_ < 1) {
    throw std::invalid_argument("RecencyBuffer: capacity must be >= 1");
  }
}

void RecencyBuffer::push(double value) {
  if (!std::isfinite(value)) {
    throw std::invalid_argument("RecencyBuffer: value must be finite");
  }
  entries_.push_back(value);
  if (capacity_ && entries_.size() > *capacity_) {
    entries_.pop_front();
  }
}

WindowStats RecencyBuffer::stats() const {
  WindowStats s;
  s.count = entries_.size();
  if (s.count == 0) return s;
  double sum = 0.0;
  for (double v : entries_) sum += v;
  s.mean = sum / static_cast<double>(s.count);
  double sq = 0.0;
  for (double v : entries_) {
    const double d = v - s.mean;
    sq += d * d;
  }
  s.variance = sq / static_cast<double>(s.count);
  return s;
}

}  // namespace trackmon
