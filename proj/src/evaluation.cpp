#include "trackmon/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "trackmon/rng.hpp"

namespace trackmon {

void TrialConfig::validate() const {
  if (n_trials < 1) {
    throw std::invalid_argument("TrialConfig: n_trials must be >= 1");
  }
  if (!(noise_sigma >= 0.0)) {
    throw std::invalid_argument("TrialConfig: noise_sigma must be >= 0");
  }
}

const char* to_string(TrialOutcome outcome) {
  switch (outcome) {
    case TrialOutcome::false_positive:
      return "false_positive";
    case TrialOutcome::true_positive:
      return "true_positive";
    case TrialOutcome::miss:
      return "miss";
    case TrialOutcome::correct_negative:
      return "correct_negative";
  }
  return "unknown";
}

namespace {

std::vector<MetricSample> perturb(std::span<const MetricSample> video,
                                  double sigma, std::uint64_t seed) {
  std::vector<MetricSample> out(video.begin(), video.end());
  if (sigma > 0.0) {
    Rng rng(seed);
    for (MetricSample& s : out) {
      s.value = std::clamp(s.value + sigma * rng.gaussian(), 0.0, 1.0);
    }
  }
  return out;
}

TrialResult classify(const std::optional<std::int64_t>& tau_hat,
                     std::int64_t tau_gt, std::int64_t length) {
  TrialResult r;
  r.tau_hat = tau_hat;
  if (tau_hat) {
    r.outcome = *tau_hat < tau_gt ? TrialOutcome::false_positive
                                  : TrialOutcome::true_positive;
  } else {
    r.outcome = tau_gt < length ? TrialOutcome::miss
                                : TrialOutcome::correct_negative;
  }
  return r;
}

}  // namespace

VideoEvaluation run_trials(std::string video_id,
                           std::span<const MetricSample> video,
                           const MonitorConfig& monitor_cfg,
                           const OracleConfig& oracle_cfg,
                           const TrialConfig& trial_cfg, ExecMode mode) {
  monitor_cfg.validate();
  oracle_cfg.validate();
  trial_cfg.validate();
  if (video.empty()) {
    throw std::invalid_argument("run_trials: empty video stream");
  }

  VideoEvaluation eval;
  eval.video_id = std::move(video_id);
  eval.length = static_cast<std::int64_t>(video.size());

  // Ground truth lives on the unperturbed stream, smoothed exactly as the
  // monitor smooths, and is shared by all of this video's trials.
  std::vector<MetricSample> smoothed(video.begin(), video.end());
  EmaSmoother smoother(monitor_cfg.smoothing_factor);
  for (MetricSample& s : smoothed) s.value = smoother.smooth(s.value);
  eval.tau_gt = ground_truth_failure(smoothed, oracle_cfg);

  const std::int64_t n = trial_cfg.n_trials;
  eval.trials.resize(static_cast<std::size_t>(n));

  auto one_trial = [&](std::int64_t j) {
    const auto perturbed = perturb(video, trial_cfg.noise_sigma,
                                   trial_cfg.base_seed +
                                       static_cast<std::uint64_t>(j));
    const MonitorSummary summary = run_monitor_summary(perturbed, monitor_cfg);
    eval.trials[static_cast<std::size_t>(j)] =
        classify(summary.stopping_time, eval.tau_gt, eval.length);
  };

  if (mode == ExecMode::parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (std::int64_t j = 0; j < n; ++j) one_trial(j);
  } else {
    for (std::int64_t j = 0; j < n; ++j) one_trial(j);
  }
  return eval;
}

EvaluationReport aggregate(std::vector<VideoEvaluation> per_video) {
  if (per_video.empty()) {
    throw std::invalid_argument("aggregate: at least one video required");
  }
  EvaluationReport report;
  report.n_videos = static_cast<std::int64_t>(per_video.size());
  report.n_trials = static_cast<std::int64_t>(per_video.front().trials.size());

  std::int64_t total = 0;
  std::int64_t false_positives = 0;
  std::int64_t misses = 0;
  std::vector<double> delays;
  for (const VideoEvaluation& v : per_video) {
    for (const TrialResult& trial : v.trials) {
      ++total;
      switch (trial.outcome) {
        case TrialOutcome::false_positive:
          ++false_positives;
          break;
        case TrialOutcome::true_positive:
          delays.push_back(static_cast<double>(*trial.tau_hat - v.tau_gt));
          break;
        case TrialOutcome::miss:
          ++misses;
          break;
        case TrialOutcome::correct_negative:
          break;
      }
    }
  }

  report.fpr = static_cast<double>(false_positives) / static_cast<double>(total);
  report.miss_rate = static_cast<double>(misses) / static_cast<double>(total);
  if (!delays.empty()) {
    double sum = 0.0;
    for (double d : delays) sum += d;
    const double mean = sum / static_cast<double>(delays.size());
    double sq = 0.0;
    for (double d : delays) sq += (d - mean) * (d - mean);
    report.add_mean = mean;
    report.add_std = std::sqrt(sq / static_cast<double>(delays.size()));
  }
  report.per_video = std::move(per_video);
  return report;
}

}  // namespace trackmon
