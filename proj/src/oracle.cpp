#include "trackmon/oracle.hpp"

#include <stdexcept>

namespace trackmon {

void OracleConfig::validate() const {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw std::invalid_argument("OracleConfig: epsilon must be in (0, 1)");
  }
  if (w_gt < 1) {
    throw std::invalid_argument("OracleConfig: w_gt must be >= 1");
  }
}

std::int64_t ground_truth_failure(std::span<const MetricSample> stream,
                                  const OracleConfig& cfg) {
  cfg.validate();
  if (stream.empty()) {
    throw std::invalid_argument("ground_truth_failure: empty stream");
  }
  const std::size_t n = stream.size();
  std::size_t run = 0;  // length of the current sub-epsilon run
  for (std::size_t i = 0; i < n; ++i) {
    if (stream[i].value < cfg.epsilon) {
      ++run;
      if (run >= cfg.w_gt) {
        return static_cast<std::int64_t>(i - cfg.w_gt + 2);  // 1-based start
      }
    } else {
      run = 0;
    }
  }
  return static_cast<std::int64_t>(n);  // no failure within the video
}

}  // namespace trackmon
