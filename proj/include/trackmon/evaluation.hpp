#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "trackmon/monitor.hpp"
#include "trackmon/oracle.hpp"
#include "trackmon/stream.hpp"

namespace trackmon {

// Noise-randomized repetitions of one video. Trial j perturbs every metric
// value with Gaussian(0, noise_sigma^2) noise under seed base_seed + j, so a
// report is a pure function of (streams, configs, base_seed).
struct TrialConfig {
  std::int64_t n_trials = 50;
  double noise_sigma = 0.01;
  std::uint64_t base_seed = 0;

  void validate() const;
};

enum class TrialOutcome {
  false_positive,   // alert before the ground-truth failure
  true_positive,    // alert at or after it
  miss,             // failure inside the video but no alert
  correct_negative  // no failure and no alert
};

const char* to_string(TrialOutcome outcome);

struct TrialResult {
  std::optional<std::int64_t> tau_hat;
  TrialOutcome outcome = TrialOutcome::correct_negative;
};

struct VideoEvaluation {
  std::string video_id;
  std::int64_t tau_gt = 0;  // on the unperturbed smoothed stream
  std::int64_t length = 0;
  std::vector<TrialResult> trials;
};

struct EvaluationReport {
  std::vector<VideoEvaluation> per_video;
  double fpr = 0.0;
  std::optional<double> add_mean;  // absent when there are no true positives
  std::optional<double> add_std;   // population convention
  double miss_rate = 0.0;
  std::int64_t n_videos = 0;
  std::int64_t n_trials = 0;
};

// Trials are independent given their seeds, so the parallel kernel and the
// serial reference produce bit-identical results; the serial path is kept
// for exactly that comparison (and for the benchmark).
enum class ExecMode { serial, parallel };

// Runs n_trials noise-randomized monitors over one video and classifies each
// stopping time against the ground-truth failure time computed on the
// unperturbed smoothed stream.
VideoEvaluation run_trials(std::string video_id,
                           std::span<const MetricSample> video,
                           const MonitorConfig& monitor_cfg,
                           const OracleConfig& oracle_cfg,
                           const TrialConfig& trial_cfg,
                           ExecMode mode = ExecMode::parallel);

// Deterministic reduction over per-video results, keyed by (video, trial)
// order. Requires at least one video.
EvaluationReport aggregate(std::vector<VideoEvaluation> per_video);

}  // namespace trackmon
