#include "ringseg/segmenter.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "ringseg/fluents.hpp"
#include "ringseg/signal.hpp"
#include "ringseg/trace.hpp"

namespace ringseg {

namespace {

// Peaks below this (normalized units per s^2) are rounding debris from
// columns with no real motion, not accelerations; such features are skipped
// so the relative alpha threshold never latches onto numerical noise.
constexpr double kPeakFloor = 1e-9;

}  // namespace

void validate_config(const SegmenterConfig& cfg, double sample_rate) {
  if (!(cfg.alpha > 0.0) || !(cfg.alpha < 1.0)) {
    throw std::invalid_argument("segmenter: alpha must lie in (0, 1), got " +
                                std::to_string(cfg.alpha));
  }
  if (cfg.sg_window % 2 == 0 || cfg.sg_window <= cfg.sg_polyorder + 1) {
    throw std::invalid_argument("segmenter: sg_window must be odd and exceed sg_polyorder+1");
  }
  if (cfg.sg_polyorder < 2) {
    throw std::invalid_argument("segmenter: sg_polyorder must be at least 2");
  }
  if (!(cfg.min_gap > 0.0)) {
    throw std::invalid_argument("segmenter: min_gap must be positive");
  }
  if (!(cfg.lowpass_cutoff > 0.0) || !(cfg.lowpass_cutoff < sample_rate / 2.0)) {
    throw std::invalid_argument("segmenter: lowpass_cutoff must lie in (0, sample_rate/2)");
  }
}

nlohmann::json segmenter_config_to_json(const SegmenterConfig& cfg) {
  return nlohmann::json{
      {"alpha", cfg.alpha},
      {"sg_window", cfg.sg_window},
      {"sg_polyorder", cfg.sg_polyorder},
      {"lowpass_cutoff", cfg.lowpass_cutoff},
      {"min_gap", cfg.min_gap},
      {"use_reachable_in_filtering", cfg.use_reachable_in_filtering},
      {"literal_filter", cfg.literal_filter},
  };
}

SegmenterConfig segmenter_config_from_json(const nlohmann::json& j, SegmenterConfig base) {
  if (!j.is_object()) {
    throw std::invalid_argument("segmenter config: expected a JSON object");
  }
  for (const auto& [key, value] : j.items()) {
    if (key == "alpha") {
      base.alpha = value.get<double>();
    } else if (key == "sg_window") {
      base.sg_window = value.get<int>();
    } else if (key == "sg_polyorder") {
      base.sg_polyorder = value.get<int>();
    } else if (key == "lowpass_cutoff") {
      base.lowpass_cutoff = value.get<double>();
    } else if (key == "min_gap") {
      base.min_gap = value.get<double>();
    } else if (key == "use_reachable_in_filtering") {
      base.use_reachable_in_filtering = value.get<bool>();
    } else if (key == "literal_filter") {
      base.literal_filter = value.get<bool>();
    } else {
      throw std::invalid_argument("segmenter config: unknown key '" + key + "'");
    }
  }
  return base;
}

std::vector<Changepoint> detect_changepoints(const ExecutionTrace& trace,
                                             const SegmenterConfig& cfg) {
  validate_config(cfg, trace.sample_rate);
  const int n = static_cast<int>(trace.frames.size());
  if (n < 2 * cfg.sg_window) {
    throw std::invalid_argument("detect_changepoints: trace of " + std::to_string(n) +
                                " frames is shorter than 2*sg_window = " +
                                std::to_string(2 * cfg.sg_window));
  }

  const Eigen::MatrixXd filtered =
      lowpass(normalize_features(kinematic_matrix(trace)), cfg.lowpass_cutoff,
              trace.sample_rate);
  const double dt = 1.0 / trace.sample_rate;

  std::vector<Changepoint> candidates;
  std::vector<double> series(static_cast<size_t>(n));
  for (int col = 0; col < static_cast<int>(filtered.cols()); ++col) {
    for (int r = 0; r < n; ++r) series[static_cast<size_t>(r)] = filtered(r, col);
    std::vector<double> mag =
        sg_second_derivative(series, cfg.sg_window, cfg.sg_polyorder, dt);
    for (double& v : mag) v = std::fabs(v);

    const std::vector<int> peaks = find_peaks(mag);
    if (peaks.empty()) continue;
    double top = 0.0;
    for (int p : peaks) top = std::max(top, mag[static_cast<size_t>(p)]);
    if (top < kPeakFloor) continue;

    const double threshold = cfg.alpha * top;
    for (int p : peaks) {
      if (mag[static_cast<size_t>(p)] > threshold) {
        candidates.push_back({p, trace.frames[static_cast<size_t>(p)].t, col});
      }
    }
  }

  std::sort(candidates.begin(), candidates.end(), [](const Changepoint& a, const Changepoint& b) {
    if (a.index != b.index) return a.index < b.index;
    return a.source_feature < b.source_feature;
  });
  std::vector<Changepoint> merged;
  for (const Changepoint& c : candidates) {
    if (merged.empty() || merged.back().index != c.index) merged.push_back(c);
  }
  return merged;
}

std::vector<Changepoint> filter_changepoints(const ExecutionTrace& trace,
                                             const std::vector<Changepoint>& candidates,
                                             const SegmenterConfig& cfg) {
  for (size_t i = 1; i < candidates.size(); ++i) {
    if (candidates[i].t <= candidates[i - 1].t) {
      throw std::invalid_argument("filter_changepoints: candidates must be sorted by time");
    }
  }

  FluentSet prev_fluents;  // empty start: the first candidate always differs
  double prev_t = trace.frames.empty() ? 0.0 : trace.frames.front().t;

  std::vector<Changepoint> kept;
  for (const Changepoint& c : candidates) {
    if (c.index < 0 || c.index >= static_cast<int>(trace.frames.size())) {
      throw std::invalid_argument("filter_changepoints: candidate index " +
                                  std::to_string(c.index) + " out of range");
    }
    FluentSet f = compute_fluents(trace.frames[static_cast<size_t>(c.index)]);
    if (!cfg.use_reachable_in_filtering) f = strip_reachable(f);

    const bool remove = fluents_equal(f, prev_fluents) || (c.t - prev_t < cfg.min_gap);
    if (!remove) kept.push_back(c);
    if (cfg.literal_filter || !remove) {
      prev_fluents = std::move(f);
      prev_t = c.t;
    }
  }
  return kept;
}

std::vector<Segment> segment(const ExecutionTrace& trace, const SegmenterConfig& cfg) {
  const std::vector<Changepoint> kept =
      filter_changepoints(trace, detect_changepoints(trace, cfg), cfg);

  const int last = static_cast<int>(trace.frames.size()) - 1;
  std::vector<Changepoint> bounds;
  bounds.push_back({0, trace.frames.front().t, std::nullopt});
  for (const Changepoint& c : kept) {
    if (c.index != 0 && c.index != last) bounds.push_back(c);
  }
  bounds.push_back({last, trace.frames.back().t, std::nullopt});

  std::vector<Segment> segments;
  segments.reserve(bounds.size() - 1);
  for (size_t i = 0; i + 1 < bounds.size(); ++i) {
    segments.push_back({bounds[i], bounds[i + 1]});
  }
  return segments;
}

void save_segments(const std::vector<Segment>& segments, const SegmenterConfig& cfg,
                   const std::filesystem::path& path) {
  nlohmann::json list = nlohmann::json::array();
  for (const Segment& s : segments) {
    list.push_back({
        {"start_t", s.start.t},
        {"end_t", s.end.t},
        {"start_idx", s.start.index},
        {"end_idx", s.end.index},
    });
  }
  write_json_atomic({{"config", segmenter_config_to_json(cfg)}, {"segments", list}}, path);
}

std::vector<Segment> load_segments(const std::filesystem::path& path) {
  const nlohmann::json j = read_json_file(path);
  const nlohmann::json* list = nullptr;
  if (j.is_array()) {
    list = &j;
  } else if (j.is_object() && j.contains("segments") && j["segments"].is_array()) {
    list = &j["segments"];
  } else {
    throw std::invalid_argument("load_segments: " + path.string() +
                                ": expected a segment array or an object with 'segments'");
  }

  std::vector<Segment> segments;
  segments.reserve(list->size());
  for (const nlohmann::json& e : *list) {
    if (!e.is_object() || !e.contains("start_t") || !e.contains("end_t") ||
        !e.contains("start_idx") || !e.contains("end_idx")) {
      throw std::invalid_argument("load_segments: " + path.string() +
                                  ": segment entries need start_t/end_t/start_idx/end_idx");
    }
    Segment s;
    s.start = {e["start_idx"].get<int>(), e["start_t"].get<double>(), std::nullopt};
    s.end = {e["end_idx"].get<int>(), e["end_t"].get<double>(), std::nullopt};
    if (!(s.start.t < s.end.t)) {
      throw std::invalid_argument("load_segments: " + path.string() +
                                  ": segment must have start_t < end_t");
    }
    segments.push_back(s);
  }
  return segments;
}

}  // namespace ringseg
