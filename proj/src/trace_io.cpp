#include "trackmon/trace_io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace trackmon {

namespace {

using nlohmann::json;

[[noreturn]] void fail_at(const std::filesystem::path& path, std::size_t line,
                          const std::string& message) {
  std::ostringstream os;
  os << path.string() << ":" << line << ": " << message;
  throw std::runtime_error(os.str());
}

std::string format_double(double v) {
  std::array<char, 32> buf;
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), end);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return fields;
}

double parse_double(std::string_view field, const std::filesystem::path& path,
                    std::size_t line) {
  double value{};
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    fail_at(path, line, "cannot parse number '" + std::string(field) + "'");
  }
  return value;
}

std::int64_t parse_int(std::string_view field,
                       const std::filesystem::path& path, std::size_t line) {
  std::int64_t value{};
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    fail_at(path, line, "cannot parse integer '" + std::string(field) + "'");
  }
  return value;
}

// Iterates data lines of a CSV trace, skipping '#' comments and the column
// header.
class CsvReader {
 public:
  CsvReader(const std::filesystem::path& path, std::string_view header)
      : path_(path), header_(header), in_(path) {
    if (!in_) {
      throw std::runtime_error("cannot open " + path.string());
    }
  }

  bool next(std::string& line) {
    while (std::getline(in_, line)) {
      ++line_no_;
      const std::string_view content = trim(line);
      if (content.empty() || content.front() == '#') continue;
      if (content == header_) continue;
      line = std::string(content);
      return true;
    }
    return false;
  }

  std::size_t line_no() const { return line_no_; }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::string header_;
  std::ifstream in_;
  std::size_t line_no_ = 0;
};

void check_frame_dense(std::int64_t frame, std::int64_t expected,
                       const std::filesystem::path& path, std::size_t line) {
  if (frame != expected) {
    std::ostringstream os;
    os << "frame index " << frame << " breaks dense ordering (expected "
       << expected << ")";
    fail_at(path, line, os.str());
  }
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  return out;
}

}  // namespace

Metric metric_from_string(std::string_view name) {
  if (name == "ngiou") return Metric::ngiou;
  if (name == "pc") return Metric::pc;
  if (name == "cg") return Metric::cg;
  if (name == "sg") return Metric::sg;
  if (name == "raw") return Metric::raw;
  throw std::invalid_argument("unknown metric '" + std::string(name) + "'");
}

const char* to_string(Metric metric) {
  switch (metric) {
    case Metric::ngiou:
      return "ngiou";
    case Metric::pc:
      return "pc";
    case Metric::cg:
      return "cg";
    case Metric::sg:
      return "sg";
    case Metric::raw:
      return "raw";
  }
  return "unknown";
}

const char* to_string(SourceKind kind) {
  switch (kind) {
    case SourceKind::box_pair:
      return "box_pair";
    case SourceKind::response_maps:
      return "response_maps";
    case SourceKind::raw_metric:
      return "raw_metric";
  }
  return "unknown";
}

SourceKind source_for_metric(Metric metric) {
  switch (metric) {
    case Metric::ngiou:
      return SourceKind::box_pair;
    case Metric::pc:
    case Metric::cg:
    case Metric::sg:
      return SourceKind::response_maps;
    case Metric::raw:
      return SourceKind::raw_metric;
  }
  throw std::invalid_argument("unknown metric");
}

double default_epsilon(Metric metric) {
  switch (metric) {
    case Metric::ngiou:
      return 0.55;
    case Metric::pc:
      return 0.50;
    case Metric::cg:
      return 0.95;
    case Metric::sg:
      return 0.90;
    case Metric::raw:
      return 0.55;
  }
  throw std::invalid_argument("unknown metric");
}

std::vector<MetricSample> read_metric_csv(const std::filesystem::path& path) {
  CsvReader reader(path, "frame,value");
  std::vector<MetricSample> stream;
  std::string line;
  while (reader.next(line)) {
    const auto fields = split_fields(line);
    if (fields.size() != 2) {
      fail_at(path, reader.line_no(), "expected 2 fields 'frame,value'");
    }
    const std::int64_t frame = parse_int(fields[0], path, reader.line_no());
    const double value = parse_double(fields[1], path, reader.line_no());
    check_frame_dense(frame, static_cast<std::int64_t>(stream.size()) + 1,
                      path, reader.line_no());
    if (!(value >= 0.0 && value <= 1.0)) {
      std::ostringstream os;
      os << "value " << value << " outside [0, 1] at frame " << frame;
      fail_at(path, reader.line_no(), os.str());
    }
    stream.push_back(MetricSample{frame, value});
  }
  return stream;
}

std::vector<BoxTrace> read_box_csv(const std::filesystem::path& path) {
  CsvReader reader(path, "frame,x,y,w,h");
  std::vector<BoxTrace> boxes;
  std::string line;
  while (reader.next(line)) {
    const auto fields = split_fields(line);
    if (fields.size() != 5) {
      fail_at(path, reader.line_no(), "expected 5 fields 'frame,x,y,w,h'");
    }
    const std::int64_t frame = parse_int(fields[0], path, reader.line_no());
    check_frame_dense(frame, static_cast<std::int64_t>(boxes.size()) + 1, path,
                      reader.line_no());
    try {
      boxes.push_back(
          BoxTrace{frame, BoundingBox(
                              parse_double(fields[1], path, reader.line_no()),
                              parse_double(fields[2], path, reader.line_no()),
                              parse_double(fields[3], path, reader.line_no()),
                              parse_double(fields[4], path, reader.line_no()))});
    } catch (const std::invalid_argument& e) {
      fail_at(path, reader.line_no(), e.what());
    }
  }
  return boxes;
}

std::vector<ResponseMap> read_maps_jsonl(const std::filesystem::path& path,
                                         bool normalize) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  std::vector<ResponseMap> maps;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      fail_at(path, line_no, e.what());
    }
    if (obj.contains("format_version") && !obj.contains("t")) {
      continue;  // header line
    }
    if (!obj.contains("t") || !obj.contains("rows") || !obj.contains("cols") ||
        !obj.contains("data") || !obj["data"].is_array()) {
      fail_at(path, line_no, "expected fields t, rows, cols, data");
    }
    const std::int64_t t = obj["t"].get<std::int64_t>();
    check_frame_dense(t, static_cast<std::int64_t>(maps.size()) + 1, path,
                      line_no);
    const auto rows = obj["rows"].get<std::int64_t>();
    const auto cols = obj["cols"].get<std::int64_t>();
    if (rows < 1 || cols < 1) {
      fail_at(path, line_no, "rows and cols must be >= 1");
    }
    std::vector<double> values;
    values.reserve(obj["data"].size());
    for (const json& v : obj["data"]) {
      if (!v.is_number()) fail_at(path, line_no, "data must be numeric");
      values.push_back(v.get<double>());
    }
    try {
      if (normalize) {
        maps.push_back(ResponseMap::normalized(static_cast<std::size_t>(rows),
                                               static_cast<std::size_t>(cols),
                                               std::move(values)));
      } else {
        maps.emplace_back(static_cast<std::size_t>(rows),
                          static_cast<std::size_t>(cols), std::move(values));
      }
    } catch (const std::invalid_argument& e) {
      fail_at(path, line_no, e.what());
    }
  }
  return maps;
}

std::vector<MetricSample> metric_from_boxes(std::span<const BoxTrace> pred,
                                            std::span<const BoxTrace> gt) {
  if (pred.size() != gt.size()) {
    throw std::runtime_error(
        "prediction and ground-truth traces differ in length");
  }
  std::vector<MetricSample> stream;
  stream.reserve(pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (pred[i].frame != gt[i].frame) {
      throw std::runtime_error("prediction and ground-truth frames misaligned");
    }
    stream.push_back(
        MetricSample{pred[i].frame, ngiou(pred[i].box, gt[i].box)});
  }
  return stream;
}

std::vector<MetricSample> metric_from_maps(std::span<const ResponseMap> maps,
                                           Metric metric,
                                           std::size_t sigma_window) {
  if (metric != Metric::pc && metric != Metric::cg && metric != Metric::sg) {
    throw std::invalid_argument(
        "response maps provide pc, cg, or sg metrics only");
  }
  std::vector<MetricSample> stream;
  stream.reserve(maps.size());
  WindowedNormalizer normalizer(sigma_window);
  std::int64_t t = 0;
  for (const ResponseMap& map : maps) {
    ++t;
    double value = 0.0;
    switch (metric) {
      case Metric::pc:
        value = peak_correlation(map);
        break;
      case Metric::cg: {
        const double pc = peak_correlation(map);
        normalizer.push(pc);
        value = certainty_gain(pc, normalizer);
        break;
      }
      case Metric::sg: {
        const double sharpness = apce(map);
        normalizer.push(sharpness);
        value = sharpness_gain(sharpness, normalizer);
        break;
      }
      default:
        break;
    }
    stream.push_back(MetricSample{t, value});
  }
  return stream;
}

std::vector<MetricSample> ingest(const TraceBundle& bundle,
                                 const IngestOptions& options) {
  if (source_for_metric(options.metric) != bundle.source) {
    throw std::invalid_argument(std::string("metric '") +
                                to_string(options.metric) +
                                "' cannot be computed from a " +
                                to_string(bundle.source) + " trace");
  }
  switch (bundle.source) {
    case SourceKind::raw_metric:
      return read_metric_csv(bundle.primary);
    case SourceKind::box_pair: {
      const auto pred = read_box_csv(bundle.primary);
      const auto gt = read_box_csv(bundle.secondary);
      return metric_from_boxes(pred, gt);
    }
    case SourceKind::response_maps: {
      const auto maps = read_maps_jsonl(bundle.primary, options.normalize_maps);
      return metric_from_maps(maps, options.metric, options.sigma_window);
    }
  }
  throw std::invalid_argument("unknown source kind");
}

void write_metric_csv(const std::filesystem::path& path,
                      std::span<const MetricSample> stream) {
  auto out = open_out(path);
  out << "# format_version=" << kFormatVersion << "\n";
  out << "frame,value\n";
  for (const MetricSample& s : stream) {
    out << s.t << "," << format_double(s.value) << "\n";
  }
}

void write_box_csv(const std::filesystem::path& path,
                   std::span<const BoxTrace> boxes) {
  auto out = open_out(path);
  out << "# format_version=" << kFormatVersion << "\n";
  out << "frame,x,y,w,h\n";
  for (const BoxTrace& b : boxes) {
    out << b.frame << "," << format_double(b.box.x) << ","
        << format_double(b.box.y) << "," << format_double(b.box.w) << ","
        << format_double(b.box.h) << "\n";
  }
}

void write_maps_jsonl(const std::filesystem::path& path,
                      std::span<const ResponseMap> maps) {
  auto out = open_out(path);
  out << R"({"format_version":)" << kFormatVersion
      << R"(,"kind":"response_maps"})" << "\n";
  std::int64_t t = 0;
  for (const ResponseMap& map : maps) {
    ++t;
    out << R"({"t":)" << t << R"(,"rows":)" << map.rows() << R"(,"cols":)"
        << map.cols() << R"(,"data":[)";
    bool first = true;
    for (double v : map.values()) {
      if (!first) out << ",";
      out << format_double(v);
      first = false;
    }
    out << "]}\n";
  }
}

void write_bundle_meta(const std::filesystem::path& path,
                       const TraceBundle& bundle) {
  json meta;
  meta["format_version"] = kFormatVersion;
  meta["video_id"] = bundle.video_id;
  meta["source"] = to_string(bundle.source);
  meta["frame_rate"] = bundle.frame_rate;
  auto out = open_out(path);
  out << meta.dump(2) << "\n";
}

void write_event_log(std::ostream& out, const MonitorResult& result,
                     const EventLogInfo& info) {
  out << R"({"format_version":)" << kFormatVersion
      << R"(,"kind":"trackmon_events","metric":")" << to_string(info.metric)
      << R"(","epsilon":)" << format_double(info.epsilon) << R"(,"alpha":)"
      << format_double(info.alpha) << R"(,"betting":")" << info.betting
      << R"(","seed":)" << info.seed << "}\n";
  for (const StepEvent& e : result.trajectory) {
    out << R"({"t":)" << e.t << R"(,"m":)" << format_double(e.m_smoothed)
        << R"(,"lambda":)" << format_double(e.lambda) << R"(,"factor":)"
        << format_double(e.factor) << R"(,"x":)" << format_double(e.x)
        << R"(,"alert":)" << (e.alert ? "true" : "false") << "}\n";
  }
}

void write_event_log(const std::filesystem::path& path,
                     const MonitorResult& result, const EventLogInfo& info) {
  auto out = open_out(path);
  write_event_log(out, result, info);
}

std::string report_to_json(const EvaluationReport& report) {
  json doc;
  doc["format_version"] = kFormatVersion;
  doc["n_videos"] = report.n_videos;
  doc["n_trials"] = report.n_trials;
  doc["fpr"] = report.fpr;
  doc["miss_rate"] = report.miss_rate;
  doc["add_mean"] = report.add_mean ? json(*report.add_mean) : json(nullptr);
  doc["add_std"] = report.add_std ? json(*report.add_std) : json(nullptr);
  json videos = json::array();
  for (const VideoEvaluation& v : report.per_video) {
    json video;
    video["video_id"] = v.video_id;
    video["tau_gt"] = v.tau_gt;
    video["length"] = v.length;
    json trials = json::array();
    for (std::size_t j = 0; j < v.trials.size(); ++j) {
      const TrialResult& trial = v.trials[j];
      json row;
      row["trial"] = j;
      row["tau_hat"] = trial.tau_hat ? json(*trial.tau_hat) : json(nullptr);
      row["outcome"] = to_string(trial.outcome);
      trials.push_back(std::move(row));
    }
    video["trials"] = std::move(trials);
    videos.push_back(std::move(video));
  }
  doc["per_video"] = std::move(videos);
  return doc.dump(2) + "\n";
}

void write_report_json(const std::filesystem::path& path,
                       const EvaluationReport& report) {
  auto out = open_out(path);
  out << report_to_json(report);
}

void write_trials_csv(const std::filesystem::path& path,
                      const EvaluationReport& report) {
  auto out = open_out(path);
  out << "# format_version=" << kFormatVersion << "\n";
  out << "video_id,trial,tau_gt,tau_hat,outcome,delay\n";
  for (const VideoEvaluation& v : report.per_video) {
    for (std::size_t j = 0; j < v.trials.size(); ++j) {
      const TrialResult& trial = v.trials[j];
      out << v.video_id << "," << j << "," << v.tau_gt << ",";
      if (trial.tau_hat) out << *trial.tau_hat;
      out << "," << to_string(trial.outcome) << ",";
      if (trial.outcome == TrialOutcome::true_positive) {
        out << (*trial.tau_hat - v.tau_gt);
      }
      out << "\n";
    }
  }
}

namespace {

bool ends_with(const std::string& name, std::string_view suffix) {
  return name.size() >= suffix.size() &&
         name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0;
}

void apply_meta(TraceBundle& bundle, const std::filesystem::path& meta_path) {
  if (!std::filesystem::exists(meta_path)) return;
  std::ifstream in(meta_path);
  json meta;
  try {
    in >> meta;
  } catch (const json::parse_error& e) {
    throw std::runtime_error(meta_path.string() + ": " + e.what());
  }
  if (meta.contains("video_id")) {
    bundle.video_id = meta["video_id"].get<std::string>();
  }
  if (meta.contains("frame_rate")) {
    bundle.frame_rate = meta["frame_rate"].get<double>();
    if (!(bundle.frame_rate > 0.0)) {
      throw std::runtime_error(meta_path.string() +
                               ": frame_rate must be > 0");
    }
  }
}

}  // namespace

std::size_t frames_from_seconds(double seconds, double frame_rate) {
  if (!(seconds > 0.0) || !(frame_rate > 0.0)) {
    throw std::invalid_argument(
        "frames_from_seconds: seconds and frame rate must be > 0");
  }
  const auto frames = static_cast<std::int64_t>(std::llround(seconds * frame_rate));
  return static_cast<std::size_t>(std::max<std::int64_t>(1, frames));
}

std::vector<TraceBundle> discover_bundles(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw std::runtime_error(dir.string() + " is not a directory");
  }
  std::map<std::string, TraceBundle> bundles;
  std::vector<std::filesystem::path> gt_files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    auto stem_of = [&](std::string_view suffix) {
      return name.substr(0, name.size() - suffix.size());
    };
    if (ends_with(name, ".metric.csv")) {
      const std::string stem = stem_of(".metric.csv");
      bundles[stem] = TraceBundle{stem, SourceKind::raw_metric, 30.0,
                                  entry.path(), {}};
    } else if (ends_with(name, ".maps.jsonl")) {
      const std::string stem = stem_of(".maps.jsonl");
      bundles[stem] = TraceBundle{stem, SourceKind::response_maps, 30.0,
                                  entry.path(), {}};
    } else if (ends_with(name, ".pred.csv")) {
      const std::string stem = stem_of(".pred.csv");
      auto gt = entry.path().parent_path() / (stem + ".gt.csv");
      if (!std::filesystem::exists(gt)) {
        throw std::runtime_error(entry.path().string() +
                                 ": no matching .gt.csv file");
      }
      bundles[stem] = TraceBundle{stem, SourceKind::box_pair, 30.0,
                                  entry.path(), gt};
    } else if (ends_with(name, ".gt.csv")) {
      gt_files.push_back(entry.path());
    }
  }
  for (const auto& gt : gt_files) {
    const std::string name = gt.filename().string();
    const std::string stem = name.substr(0, name.size() - 7);
    if (!bundles.count(stem)) {
      throw std::runtime_error(gt.string() + ": no matching .pred.csv file");
    }
  }
  if (bundles.empty()) {
    throw std::runtime_error("no trace bundles found in " + dir.string());
  }
  std::vector<TraceBundle> out;
  out.reserve(bundles.size());
  for (auto& [stem, bundle] : bundles) {
    apply_meta(bundle, dir / (stem + ".meta.json"));
    out.push_back(std::move(bundle));
  }
  std::sort(out.begin(), out.end(),
            [](const TraceBundle& a, const TraceBundle& b) {
              return a.video_id < b.video_id;
            });
  return out;
}

}  // namespace trackmon
