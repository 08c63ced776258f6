#pragma once

#include <cstdint>
#include <cstddef>
#include <optional>
#include <vector>

#include "trackmon/response.hpp"
#include "trackmon/stream.hpp"

namespace trackmon {

// Synthetic metric stream with a controlled failure: i.i.d. uniform noise on
// [mean - spread, mean + spread] around a mean that switches from null_mean
// to post_failure_mean at failure_at, optionally ramping linearly over
// transition_frames. Uniform noise keeps the null mean exact; clipped
// Gaussian noise would shift it.
struct StreamSpec {
  std::int64_t length = 0;
  double null_mean = 0.8;
  double null_spread = 0.0;
  std::optional<std::int64_t> failure_at{};
  double post_failure_mean = 0.2;
  std::int64_t transition_frames = 0;
  std::uint64_t seed = 0;

  void validate() const;
};

std::vector<MetricSample> generate_stream(const StreamSpec& spec);

// Gaussian-bump response maps whose peak amplitude follows the stream spec
// and whose bump widens after failure, lowering APCE at the same amplitude.
std::vector<ResponseMap> generate_response_maps(const StreamSpec& spec,
                                                std::size_t rows,
                                                std::size_t cols);

}  // namespace trackmon
