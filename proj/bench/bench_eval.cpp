// Wall-clock comparison of the OpenMP trial kernel against the serial
// reference, verifying that both produce identical reports.
//
//   trackmon_bench [videos] [trials] [length]

#ifdef _OPENMP
#include <omp.h>
#endif

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "trackmon/evaluation.hpp"
#include "trackmon/simulator.hpp"
#include "trackmon/trace_io.hpp"

using namespace trackmon;

namespace {

std::vector<std::vector<MetricSample>> make_videos(int videos, int length) {
  std::vector<std::vector<MetricSample>> out;
  out.reserve(videos);
  for (int v = 0; v < videos; ++v) {
    StreamSpec spec;
    spec.length = length;
    spec.null_mean = 0.8;
    spec.null_spread = 0.15;
    if (v % 2 == 0) {
      spec.failure_at = length / 2;
      spec.post_failure_mean = 0.2;
      spec.transition_frames = (v % 4 == 0) ? 0 : 50;
    }
    spec.seed = 9000 + static_cast<std::uint64_t>(v);
    out.push_back(generate_stream(spec));
  }
  return out;
}

std::string evaluate_all(const std::vector<std::vector<MetricSample>>& videos,
                         std::int64_t trials, ExecMode mode, double* seconds) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<VideoEvaluation> evals;
  evals.reserve(videos.size());
  for (std::size_t i = 0; i < videos.size(); ++i) {
    TrialConfig cfg;
    cfg.n_trials = trials;
    cfg.noise_sigma = 0.02;
    cfg.base_seed = static_cast<std::uint64_t>(i) *
                    static_cast<std::uint64_t>(trials);
    evals.push_back(run_trials("video_" + std::to_string(i), videos[i],
                               MonitorConfig{}, OracleConfig{}, cfg, mode));
  }
  const auto report = aggregate(std::move(evals));
  *seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                           start)
                 .count();
  return report_to_json(report);
}

}  // namespace

int main(int argc, char** argv) {
  const int videos = argc > 1 ? std::atoi(argv[1]) : 20;
  const int trials = argc > 2 ? std::atoi(argv[2]) : 200;
  const int length = argc > 3 ? std::atoi(argv[3]) : 1000;

#ifdef _OPENMP
  const int threads = omp_get_max_threads();
#else
  const int threads = 1;
#endif
  std::printf("evaluation kernel: %d videos x %d trials x %d frames, %d threads\n",
              videos, trials, length, threads);

  const auto streams = make_videos(videos, length);

  double serial_s = 0.0, parallel_s = 0.0;
  const std::string serial =
      evaluate_all(streams, trials, ExecMode::serial, &serial_s);
  const std::string parallel =
      evaluate_all(streams, trials, ExecMode::parallel, &parallel_s);

  std::printf("serial    %8.3f s\n", serial_s);
  std::printf("parallel  %8.3f s  (speedup %.2fx)\n", parallel_s,
              serial_s / parallel_s);
  if (serial != parallel) {
    std::printf("MISMATCH: serial and parallel reports differ\n");
    return 1;
  }
  std::printf("reports identical\n");
  return 0;
}
