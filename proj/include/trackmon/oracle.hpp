#pragma once

#include <cstdint>
#include <cstddef>
#include <span>

#include "trackmon/stream.hpp"

namespace trackmon {

struct OracleConfig {
  double epsilon = 0.55;
  std::size_t w_gt = 10;  // consecutive sub-epsilon frames confirming failure

  void validate() const;
};

// First frame index tau such that the w_gt values starting there are all
// below epsilon. Returns the stream length T when no such run exists (and a
// run would have to fit inside the stream), meaning no failure within the
// video. Expects the already-smoothed signal, so test and oracle observe the
// same stream. Throws on an empty stream.
std::int64_t ground_truth_failure(std::span<const MetricSample> stream,
                                  const OracleConfig& cfg);

}  // namespace trackmon
