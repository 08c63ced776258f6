#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <stdexcept>
#include <vector>

#include "trackmon/oracle.hpp"
#include "trackmon/rng.hpp"

using trackmon::ground_truth_failure;
using trackmon::MetricSample;
using trackmon::OracleConfig;

namespace {

std::vector<MetricSample> stream_of(std::initializer_list<double> values) {
  std::vector<MetricSample> out;
  std::int64_t t = 0;
  for (double v : values) out.push_back({++t, v});
  return out;
}

}  // namespace

TEST_CASE("first sub-tolerance run of the required length") {
  OracleConfig cfg;
  cfg.epsilon = 0.55;
  cfg.w_gt = 2;
  const auto stream = stream_of({0.9, 0.4, 0.9, 0.4, 0.4, 0.9});
  CHECK(ground_truth_failure(stream, cfg) == 4);
}

TEST_CASE("no failing run means tau equals the stream length") {
  OracleConfig cfg;
  cfg.epsilon = 0.55;
  cfg.w_gt = 3;
  CHECK(ground_truth_failure(stream_of({0.9, 0.8, 0.7, 0.9}), cfg) == 4);
  // Runs shorter than w_gt do not count.
  CHECK(ground_truth_failure(stream_of({0.2, 0.2, 0.9, 0.2, 0.2}), cfg) == 5);
  // A run cut off by the stream end does not count either.
  CHECK(ground_truth_failure(stream_of({0.9, 0.9, 0.9, 0.2, 0.2}), cfg) == 5);
}

TEST_CASE("window of one fires at the first crossing") {
  OracleConfig cfg;
  cfg.epsilon = 0.55;
  cfg.w_gt = 1;
  CHECK(ground_truth_failure(stream_of({0.8, 0.7, 0.3, 0.9}), cfg) == 3);
}

TEST_CASE("empty stream is rejected") {
  OracleConfig cfg;
  CHECK_THROWS_AS(ground_truth_failure({}, cfg), std::invalid_argument);
}

TEST_CASE("raising the tolerance never postpones the failure time") {
  trackmon::Rng rng(15);
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<MetricSample> stream;
    const int n = 20 + static_cast<int>(rng.uniform(0.0, 80.0));
    for (int t = 1; t <= n; ++t) {
      stream.push_back({t, rng.uniform01()});
    }
    OracleConfig lo;
    lo.epsilon = rng.uniform(0.05, 0.5);
    lo.w_gt = 1 + static_cast<std::size_t>(rng.uniform(0.0, 5.0));
    OracleConfig hi = lo;
    hi.epsilon = lo.epsilon + rng.uniform(0.0, 0.45);
    CHECK(ground_truth_failure(stream, hi) <=
          ground_truth_failure(stream, lo));
  }
}
