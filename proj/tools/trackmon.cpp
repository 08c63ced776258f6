#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "trackmon/evaluation.hpp"
#include "trackmon/monitor.hpp"
#include "trackmon/simulator.hpp"
#include "trackmon/trace_io.hpp"

namespace fs = std::filesystem;
using namespace trackmon;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitAlert = 2;

struct MonitorArgs {
  std::string metric = "raw";
  double epsilon = -1.0;  // negative: use the per-metric default
  double alpha = 0.1;
  std::string betting = "agrapa";
  double gamma = 0.1;
  std::size_t window_frames = 10;
  double window_seconds = 0.0;
  bool no_window = false;
  std::size_t sigma = 10;
  double smoothing = 0.25;
  bool normalize_maps = false;
};

void add_monitor_options(CLI::App* cmd, MonitorArgs& args) {
  cmd->add_option("--metric", args.metric, "Quality metric")
      ->check(CLI::IsMember({"ngiou", "pc", "cg", "sg", "raw"}));
  cmd->add_option("--epsilon", args.epsilon,
                  "Tolerance level (default: per-metric)");
  cmd->add_option("--alpha", args.alpha, "Significance level")
      ->check(CLI::Range(1e-9, 1.0));
  cmd->add_option("--betting", args.betting, "Betting rate strategy")
      ->check(CLI::IsMember({"agrapa", "sfogd"}));
  cmd->add_option("--gamma", args.gamma, "SF-OGD learning rate");
  auto* window = cmd->add_option("--window", args.window_frames,
                                 "Recency window w_E in frames");
  auto* window_s =
      cmd->add_option("--window-seconds", args.window_seconds,
                      "Recency window in seconds (needs frame-rate metadata)");
  auto* no_window = cmd->add_flag("--no-window", args.no_window,
                                  "Use the full history (no truncation)");
  window->excludes(window_s)->excludes(no_window);
  window_s->excludes(no_window);
  cmd->add_option("--sigma", args.sigma, "CG/SG normalization window");
  cmd->add_option("--smoothing", args.smoothing, "EMA smoothing factor")
      ->check(CLI::Range(1e-9, 1.0));
  cmd->add_flag("--normalize-maps", args.normalize_maps,
                "Min-max rescale raw response maps into [0, 1]");
}

MonitorConfig build_monitor_config(const MonitorArgs& args, Metric metric,
                                   const CLI::App* cmd, double frame_rate) {
  MonitorConfig cfg;
  cfg.epsilon = args.epsilon >= 0.0 ? args.epsilon : default_epsilon(metric);
  cfg.alpha = args.alpha;
  cfg.smoothing_factor = args.smoothing;
  cfg.betting.epsilon = cfg.epsilon;
  cfg.betting.learning_rate = args.gamma;
  cfg.betting.strategy = args.betting == "sfogd" ? BettingStrategy::sfogd
                                                 : BettingStrategy::agrapa;
  if (args.no_window) {
    cfg.recency_window = std::nullopt;
  } else if (cmd->count("--window-seconds") > 0) {
    cfg.recency_window = frames_from_seconds(args.window_seconds, frame_rate);
  } else {
    cfg.recency_window = args.window_frames;
  }
  cfg.validate();
  return cfg;
}

std::string strip_known_suffix(const std::string& name) {
  for (const char* suffix :
       {".metric.csv", ".maps.jsonl", ".pred.csv", ".gt.csv"}) {
    const std::string s(suffix);
    if (name.size() > s.size() &&
        name.compare(name.size() - s.size(), s.size(), s) == 0) {
      return name.substr(0, name.size() - s.size());
    }
  }
  return fs::path(name).stem().string();
}

// Builds a bundle for explicitly named trace files, picking up an optional
// <id>.meta.json sidecar next to the primary file.
TraceBundle bundle_for_files(const fs::path& primary, const fs::path& secondary,
                             SourceKind source) {
  TraceBundle bundle;
  bundle.video_id = strip_known_suffix(primary.filename().string());
  bundle.source = source;
  bundle.primary = primary;
  bundle.secondary = secondary;
  const fs::path meta =
      primary.parent_path() / (bundle.video_id + ".meta.json");
  if (fs::exists(meta)) {
    auto found = discover_bundles(primary.parent_path());
    for (const auto& b : found) {
      if (b.primary == primary) {
        bundle.video_id = b.video_id;
        bundle.frame_rate = b.frame_rate;
      }
    }
  }
  return bundle;
}

int cmd_monitor(const CLI::App* cmd, const MonitorArgs& args,
                const std::string& input, const std::string& pred,
                const std::string& gt, const std::string& maps,
                const std::string& events_path, std::uint64_t seed) {
  const Metric metric = metric_from_string(args.metric);
  const SourceKind source = source_for_metric(metric);

  TraceBundle bundle;
  switch (source) {
    case SourceKind::raw_metric:
      if (input.empty()) {
        throw std::runtime_error("--metric raw requires --input");
      }
      bundle = bundle_for_files(input, {}, source);
      break;
    case SourceKind::box_pair:
      if (pred.empty() || gt.empty()) {
        throw std::runtime_error("--metric ngiou requires --pred and --gt");
      }
      bundle = bundle_for_files(pred, gt, source);
      break;
    case SourceKind::response_maps:
      if (maps.empty()) {
        throw std::runtime_error("map metrics require --maps");
      }
      bundle = bundle_for_files(maps, {}, source);
      break;
  }
  if (!input.empty() && source != SourceKind::raw_metric) {
    throw std::runtime_error("--input only feeds --metric raw");
  }
  if (!maps.empty() && source != SourceKind::response_maps) {
    throw std::runtime_error("--maps only feeds pc, cg, or sg metrics");
  }

  IngestOptions options;
  options.metric = metric;
  options.sigma_window = args.sigma;
  options.normalize_maps = args.normalize_maps;
  const auto stream = ingest(bundle, options);

  const MonitorConfig cfg =
      build_monitor_config(args, metric, cmd, bundle.frame_rate);
  const MonitorResult result = run_monitor(stream, cfg);

  if (!events_path.empty()) {
    EventLogInfo info;
    info.metric = metric;
    info.epsilon = cfg.epsilon;
    info.alpha = cfg.alpha;
    info.betting = args.betting;
    info.seed = seed;
    write_event_log(fs::path(events_path), result, info);
  }

  if (result.stopping_time) {
    std::cout << "alert at t=" << *result.stopping_time << " (x="
              << result.trajectory.back().x << ")\n";
    return kExitAlert;
  }
  std::cout << "no alert after " << result.trajectory.size()
            << " frames (final x=" << (result.trajectory.empty()
                                           ? 1.0
                                           : result.trajectory.back().x)
            << ")\n";
  return kExitOk;
}

int cmd_evaluate(const CLI::App* cmd, const MonitorArgs& args,
                 const std::string& dir, std::int64_t trials,
                 double noise_sigma, std::uint64_t seed, std::size_t w_gt,
                 double w_gt_seconds, const std::string& out_summary,
                 const std::string& out_trials, bool serial) {
  const Metric metric = metric_from_string(args.metric);
  const SourceKind source = source_for_metric(metric);

  const auto bundles = discover_bundles(dir);
  for (const auto& bundle : bundles) {
    if (bundle.source != source) {
      throw std::runtime_error(
          bundle.primary.string() + ": " + to_string(bundle.source) +
          " bundle cannot feed metric '" + to_string(metric) + "'");
    }
  }

  IngestOptions options;
  options.metric = metric;
  options.sigma_window = args.sigma;
  options.normalize_maps = args.normalize_maps;

  const ExecMode mode = serial ? ExecMode::serial : ExecMode::parallel;
  std::vector<VideoEvaluation> evals;
  evals.reserve(bundles.size());
  for (std::size_t i = 0; i < bundles.size(); ++i) {
    const TraceBundle& bundle = bundles[i];
    const auto stream = ingest(bundle, options);

    const MonitorConfig monitor_cfg =
        build_monitor_config(args, metric, cmd, bundle.frame_rate);
    OracleConfig oracle_cfg;
    oracle_cfg.epsilon = monitor_cfg.epsilon;
    oracle_cfg.w_gt = cmd->count("--w-gt-seconds") > 0
                          ? frames_from_seconds(w_gt_seconds, bundle.frame_rate)
                          : w_gt;

    TrialConfig trial_cfg;
    trial_cfg.n_trials = trials;
    trial_cfg.noise_sigma = noise_sigma;
    trial_cfg.base_seed =
        seed + static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(trials);

    evals.push_back(run_trials(bundle.video_id, stream, monitor_cfg,
                               oracle_cfg, trial_cfg, mode));
  }

  const EvaluationReport report = aggregate(std::move(evals));
  std::cout << "videos=" << report.n_videos << " trials=" << report.n_trials
            << " fpr=" << report.fpr << " miss_rate=" << report.miss_rate;
  if (report.add_mean) {
    std::cout << " add=" << *report.add_mean << " +- " << *report.add_std;
  } else {
    std::cout << " add=n/a";
  }
  std::cout << "\n";

  if (!out_summary.empty()) write_report_json(out_summary, report);
  if (!out_trials.empty()) write_trials_csv(out_trials, report);
  return kExitOk;
}

int cmd_simulate(const std::string& out_dir, int videos,
                 const StreamSpec& base, std::int64_t failure_at,
                 const std::string& kind, std::size_t rows, std::size_t cols,
                 double frame_rate) {
  fs::create_directories(out_dir);
  for (int i = 0; i < videos; ++i) {
    StreamSpec spec = base;
    if (failure_at > 0) spec.failure_at = failure_at;
    spec.seed = base.seed + static_cast<std::uint64_t>(i);

    char name[32];
    std::snprintf(name, sizeof(name), "video_%04d", i);
    TraceBundle bundle;
    bundle.video_id = name;
    bundle.frame_rate = frame_rate;
    if (kind == "maps") {
      bundle.source = SourceKind::response_maps;
      bundle.primary = fs::path(out_dir) / (std::string(name) + ".maps.jsonl");
      write_maps_jsonl(bundle.primary, generate_response_maps(spec, rows, cols));
    } else {
      bundle.source = SourceKind::raw_metric;
      bundle.primary = fs::path(out_dir) / (std::string(name) + ".metric.csv");
      write_metric_csv(bundle.primary, generate_stream(spec));
    }
    write_bundle_meta(fs::path(out_dir) / (std::string(name) + ".meta.json"),
                      bundle);
  }
  std::cout << "wrote " << videos << " " << kind << " bundles to " << out_dir
            << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "trackmon: anytime-valid tracking-failure detection on quality streams"};
  app.require_subcommand(1);

  // monitor
  auto* monitor_cmd =
      app.add_subcommand("monitor", "Run the sequential test over one trace");
  MonitorArgs monitor_args;
  add_monitor_options(monitor_cmd, monitor_args);
  std::string input, pred, gt, maps, events_path;
  std::uint64_t monitor_seed = 0;
  monitor_cmd->add_option("--input", input, "Raw metric CSV");
  monitor_cmd->add_option("--pred", pred, "Predicted-box CSV");
  monitor_cmd->add_option("--gt", gt, "Ground-truth-box CSV");
  monitor_cmd->add_option("--maps", maps, "Response-map JSONL");
  monitor_cmd->add_option("--events", events_path, "Write a JSONL event log");
  monitor_cmd->add_option("--seed", monitor_seed,
                          "Seed recorded in the event-log header");

  // evaluate
  auto* evaluate_cmd = app.add_subcommand(
      "evaluate", "Noise-randomized trials and FPR/ADD aggregation");
  MonitorArgs evaluate_args;
  add_monitor_options(evaluate_cmd, evaluate_args);
  std::string eval_dir, out_summary, out_trials;
  std::int64_t trials = 50;
  double noise_sigma = 0.01;
  std::uint64_t eval_seed = 0;
  std::size_t w_gt = 10;
  double w_gt_seconds = 0.0;
  bool serial = false;
  evaluate_cmd->add_option("--dir", eval_dir, "Directory of trace bundles")
      ->required();
  evaluate_cmd->add_option("--trials", trials, "Randomized trials per video")
      ->check(CLI::PositiveNumber);
  evaluate_cmd->add_option("--noise-sigma", noise_sigma,
                           "Gaussian noise std on metric values");
  evaluate_cmd->add_option("--seed", eval_seed, "Base seed for the trials");
  auto* wgt_opt =
      evaluate_cmd->add_option("--w-gt", w_gt, "Ground-truth window in frames");
  evaluate_cmd
      ->add_option("--w-gt-seconds", w_gt_seconds,
                   "Ground-truth window in seconds")
      ->excludes(wgt_opt);
  evaluate_cmd->add_option("--out-summary", out_summary, "Summary JSON path");
  evaluate_cmd->add_option("--out-trials", out_trials,
                           "Flat per-trial CSV path");
  evaluate_cmd->add_flag("--serial", serial,
                         "Run trials on one thread (reference kernel)");

  // simulate
  auto* simulate_cmd = app.add_subcommand(
      "simulate", "Write synthetic trace bundles with controlled failures");
  std::string sim_dir, sim_kind = "metric";
  int sim_videos = 1;
  StreamSpec sim_spec;
  sim_spec.length = 500;
  sim_spec.null_mean = 0.8;
  sim_spec.null_spread = 0.1;
  sim_spec.post_failure_mean = 0.2;
  std::int64_t sim_failure_at = 0;
  std::size_t sim_rows = 17, sim_cols = 17;
  double sim_frame_rate = 30.0;
  simulate_cmd->add_option("--out", sim_dir, "Output directory")->required();
  simulate_cmd->add_option("--videos", sim_videos, "Number of videos")
      ->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--length", sim_spec.length, "Frames per video");
  simulate_cmd->add_option("--null-mean", sim_spec.null_mean,
                           "Healthy-regime mean");
  simulate_cmd->add_option("--spread", sim_spec.null_spread,
                           "Uniform half-width around the mean");
  simulate_cmd->add_option("--failure-at", sim_failure_at,
                           "Failure onset frame (0 = never)");
  simulate_cmd->add_option("--post-mean", sim_spec.post_failure_mean,
                           "Post-failure mean");
  simulate_cmd->add_option("--ramp", sim_spec.transition_frames,
                           "Linear transition length in frames");
  simulate_cmd->add_option("--seed", sim_spec.seed, "Base seed");
  simulate_cmd->add_option("--kind", sim_kind, "Trace kind")
      ->check(CLI::IsMember({"metric", "maps"}));
  simulate_cmd->add_option("--rows", sim_rows, "Response-map rows");
  simulate_cmd->add_option("--cols", sim_cols, "Response-map cols");
  simulate_cmd->add_option("--frame-rate", sim_frame_rate,
                           "Frame rate recorded in sidecars");

  CLI11_PARSE(app, argc, argv);

  try {
    if (monitor_cmd->parsed()) {
      return cmd_monitor(monitor_cmd, monitor_args, input, pred, gt, maps,
                         events_path, monitor_seed);
    }
    if (evaluate_cmd->parsed()) {
      return cmd_evaluate(evaluate_cmd, evaluate_args, eval_dir, trials,
                          noise_sigma, eval_seed, w_gt, w_gt_seconds,
                          out_summary, out_trials, serial);
    }
    if (simulate_cmd->parsed()) {
      return cmd_simulate(sim_dir, sim_videos, sim_spec, sim_failure_at,
                          sim_kind, sim_rows, sim_cols, sim_frame_rate);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
