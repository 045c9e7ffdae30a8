#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ringseg/types.hpp"

namespace ringseg {

struct SegmenterConfig {
  double alpha = 0.20;        // peak threshold, fraction of the per-feature max peak
  int sg_window = 21;         // samples, odd
  int sg_polyorder = 3;
  double lowpass_cutoff = 1.5;  // Hz
  double min_gap = 1.0;         // seconds between surviving changepoints
  bool use_reachable_in_filtering = true;
  // When true, the gap/fluent comparisons track the previous candidate even
  // if it was removed; the default compares against the last kept one.
  bool literal_filter = false;
};

// Throws std::invalid_argument on out-of-range fields.
void validate_config(const SegmenterConfig& cfg, double sample_rate);

nlohmann::json segmenter_config_to_json(const SegmenterConfig& cfg);
// Starts from `base` and overrides the keys present in `j`; unknown keys are
// rejected. Lets file configs and flag overrides layer cleanly.
SegmenterConfig segmenter_config_from_json(const nlohmann::json& j,
                                           SegmenterConfig base = {});

struct Changepoint {
  int index = 0;
  double t = 0.0;
  std::optional<int> source_feature;  // kinematic column 0..15, unset for trace edges
};

struct Segment {
  Changepoint start;
  Changepoint end;
};

// Peak detection over the normalized, low-passed second derivative of each
// kinematic feature. Per feature, peaks above alpha times that feature's
// largest peak survive; results are merged across features (exact duplicate
// indexes collapse to the lowest source column) and sorted by index.
// Requires at least 2*sg_window frames.
std::vector<Changepoint> detect_changepoints(const ExecutionTrace& trace,
                                             const SegmenterConfig& cfg);

// Removes candidates whose fluent set matches the comparison point's or that
// fall within min_gap of it. Candidates must be sorted by time.
std::vector<Changepoint> filter_changepoints(const ExecutionTrace& trace,
                                             const std::vector<Changepoint>& candidates,
                                             const SegmenterConfig& cfg);

// detect + filter, with the first and last frame added as implicit
// boundaries; consecutive boundary pairs become segments tiling the trace.
std::vector<Segment> segment(const ExecutionTrace& trace, const SegmenterConfig& cfg);

// File format: {"config": {...}, "segments": [{"start_t", "end_t",
// "start_idx", "end_idx"}]}. load_segments also accepts a bare segment array.
void save_segments(const std::vector<Segment>& segments, const SegmenterConfig& cfg,
                   const std::filesystem::path& path);
std::vector<Segment> load_segments(const std::filesystem::path& path);

}  // namespace ringseg
