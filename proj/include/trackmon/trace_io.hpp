#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "trackmon/evaluation.hpp"
#include "trackmon/geometry.hpp"
#include "trackmon/monitor.hpp"
#include "trackmon/response.hpp"
#include "trackmon/stream.hpp"

namespace trackmon {

inline constexpr int kFormatVersion = 1;

enum class Metric { ngiou, pc, cg, sg, raw };
enum class SourceKind { box_pair, response_maps, raw_metric };

Metric metric_from_string(std::string_view name);
const char* to_string(Metric metric);
const char* to_string(SourceKind kind);
SourceKind source_for_metric(Metric metric);

// Per-metric tolerance defaults. Absolute metrics (NGIoU, PC) sit near the
// range midpoint; the gain metrics are relative to recent frames, so their
// thresholds sit close to one. Raw pass-through streams default like NGIoU.
double default_epsilon(Metric metric);

struct BoxTrace {
  std::int64_t frame;
  BoundingBox box;
};

// One video's on-disk trace: a metric CSV, a response-map JSONL, or a
// prediction/ground-truth box CSV pair, plus frame-rate metadata from an
// optional <id>.meta.json sidecar (used to convert second-based windows to
// frames).
struct TraceBundle {
  std::string video_id;
  SourceKind source = SourceKind::raw_metric;
  double frame_rate = 30.0;
  std::filesystem::path primary;
  std::filesystem::path secondary;  // ground-truth boxes for box_pair
};

struct IngestOptions {
  Metric metric = Metric::raw;
  std::size_t sigma_window = 10;  // CG/SG normalization window
  bool normalize_maps = false;    // opt-in min-max rescale of raw maps
};

// Readers. Malformed input raises std::runtime_error naming file and line;
// frame indices must be dense from 1.
std::vector<MetricSample> read_metric_csv(const std::filesystem::path& path);
std::vector<BoxTrace> read_box_csv(const std::filesystem::path& path);
std::vector<ResponseMap> read_maps_jsonl(const std::filesystem::path& path,
                                         bool normalize);

// Metric derivation from decoded traces.
std::vector<MetricSample> metric_from_boxes(std::span<const BoxTrace> pred,
                                            std::span<const BoxTrace> gt);
std::vector<MetricSample> metric_from_maps(std::span<const ResponseMap> maps,
                                           Metric metric,
                                           std::size_t sigma_window);

// Full bundle-to-stream pipeline; the requested metric must match the
// bundle's source kind.
std::vector<MetricSample> ingest(const TraceBundle& bundle,
                                 const IngestOptions& options);

// Writers. Every format carries a format_version marker, so simulated and
// recorded traces are interchangeable.
void write_metric_csv(const std::filesystem::path& path,
                      std::span<const MetricSample> stream);
void write_box_csv(const std::filesystem::path& path,
                   std::span<const BoxTrace> boxes);
void write_maps_jsonl(const std::filesystem::path& path,
                      std::span<const ResponseMap> maps);
void write_bundle_meta(const std::filesystem::path& path,
                       const TraceBundle& bundle);

struct EventLogInfo {
  Metric metric = Metric::raw;
  double epsilon = 0.55;
  double alpha = 0.1;
  std::string betting = "agrapa";
  std::uint64_t seed = 0;
};

// JSONL event log: a header line followed by one
// {"t":...,"m":...,"lambda":...,"factor":...,"x":...,"alert":...} object per
// processed frame. Numbers use shortest round-trip formatting, so logs are
// byte-stable for fixed inputs.
void write_event_log(std::ostream& out, const MonitorResult& result,
                     const EventLogInfo& info);
void write_event_log(const std::filesystem::path& path,
                     const MonitorResult& result, const EventLogInfo& info);

std::string report_to_json(const EvaluationReport& report);
void write_report_json(const std::filesystem::path& path,
                       const EvaluationReport& report);

// Flat per-trial table (one row per video x trial) for delay histograms and
// window ablations.
void write_trials_csv(const std::filesystem::path& path,
                      const EvaluationReport& report);

// Scans a directory for trace bundles (*.metric.csv, *.maps.jsonl,
// *.pred.csv with a matching *.gt.csv) and their sidecars, sorted by video
// id. Throws if the directory holds no bundles.
std::vector<TraceBundle> discover_bundles(const std::filesystem::path& dir);

// Converts a second-based window to frames at the bundle's frame rate,
// rounded to the nearest frame and never below one.
std::size_t frames_from_seconds(double seconds, double frame_rate);

}  // namespace trackmon
