#include "trackmon/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "trackmon/rng.hpp"

namespace trackmon {

void StreamSpec::validate() const {
  if (length < 0) {
    throw std::invalid_argument("StreamSpec: length must be >= 0");
  }
  if (!(null_mean >= 0.0 && null_mean <= 1.0) ||
      !(post_failure_mean >= 0.0 && post_failure_mean <= 1.0)) {
    throw std::invalid_argument("StreamSpec: means must be in [0, 1]");
  }
  if (!(null_spread >= 0.0)) {
    throw std::invalid_argument("StreamSpec: spread must be >= 0");
  }
  if (transition_frames < 0) {
    throw std::invalid_argument("StreamSpec: ramp length must be >= 0");
  }
  if (failure_at && (*failure_at < 1 || *failure_at > length)) {
    throw std::invalid_argument("StreamSpec: failure_at must be in [1, T]");
  }
}

namespace {

// Fraction of the mean shift applied at frame t: 0 before failure_at, then a
// linear ramp that starts moving at the failure frame itself and completes
// transition_frames later. With a zero ramp the switch is abrupt.
double failure_progress(const StreamSpec& spec, std::int64_t t) {
  if (!spec.failure_at || t < *spec.failure_at) return 0.0;
  const double k = static_cast<double>(t - *spec.failure_at + 1);
  return std::min(1.0, k / static_cast<double>(spec.transition_frames + 1));
}

double mean_at(const StreamSpec& spec, std::int64_t t) {
  const double p = failure_progress(spec, t);
  return spec.null_mean + (spec.post_failure_mean - spec.null_mean) * p;
}

}  // namespace

std::vector<MetricSample> generate_stream(const StreamSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  std::vector<MetricSample> stream;
  stream.reserve(static_cast<std::size_t>(spec.length));
  for (std::int64_t t = 1; t <= spec.length; ++t) {
    const double mean = mean_at(spec, t);
    double v = rng.uniform(mean - spec.null_spread, mean + spec.null_spread);
    v = std::clamp(v, 0.0, 1.0);
    stream.push_back(MetricSample{t, v});
  }
  return stream;
}

std::vector<ResponseMap> generate_response_maps(const StreamSpec& spec,
                                                std::size_t rows,
                                                std::size_t cols) {
  spec.validate();
  if (rows < 1 || cols < 1 || rows * cols < 2) {
    throw std::invalid_argument(
        "generate_response_maps: need at least two cells");
  }
  const auto amplitudes = generate_stream(spec);

  // Bump geometry: the peak sits on a cell so PC equals the amplitude
  // exactly; the width triples across the failure transition.
  const std::size_t ci = rows / 2;
  const std::size_t cj = cols / 2;
  const double width_pre =
      std::max(1.0, 0.08 * static_cast<double>(std::min(rows, cols)));
  const double width_post = 3.0 * width_pre;

  std::vector<ResponseMap> maps;
  maps.reserve(amplitudes.size());
  for (const MetricSample& s : amplitudes) {
    const double p = failure_progress(spec, s.t);
    const double width = width_pre + (width_post - width_pre) * p;
    const double inv = 1.0 / (2.0 * width * width);
    std::vector<double> values(rows * cols);
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < cols; ++j) {
        const double di = static_cast<double>(i) - static_cast<double>(ci);
        const double dj = static_cast<double>(j) - static_cast<double>(cj);
        const double v = s.value * std::exp(-(di * di + dj * dj) * inv);
        values[i * cols + j] = std::clamp(v, 0.0, 1.0);
      }
    }
    maps.emplace_back(rows, cols, std::move(values));
  }
  return maps;
}

}  // namespace trackmon
