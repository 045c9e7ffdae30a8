#pragma once

#include <cstdint>
#include <map>

#include <nlohmann/json_fwd.hpp>

#include "ringseg/features.hpp"
#include "ringseg/knn.hpp"
#include "ringseg/segmenter.hpp"
#include "ringseg/types.hpp"

namespace ringseg {

// Everything the batch commands need to rerun a result bit-identically.
// Serialized into every output file.
struct PipelineConfig {
  SegmenterConfig segmenter;
  FeatureConfig features;
  // Per-class feature masks. Classes not listed fall back to the duration
  // rule: mean annotated duration below short_action_cutoff keeps Boolean
  // features only, everything else uses the full mixed metric.
  std::map<Action, FeatureMask> masks;
  double short_action_cutoff = 2.0;  // seconds
  // Neighborhood size. 0 selects the most-frequent-class occurrence count
  // (choose_k) over whatever dataset is being processed.
  int k = 0;
  std::map<Action, int> exemplars;  // pinned exemplar segment ids
  std::uint64_t seed = 0;
  // Pool overlap/duration per class instead of averaging per occurrence.
  bool pool_matching = false;
};

nlohmann::json pipeline_config_to_json(const PipelineConfig& cfg);
// Starts from `base` and overrides the keys present in `j`; unknown keys are
// rejected at every level. "k" accepts an integer or the string "auto".
PipelineConfig pipeline_config_from_json(const nlohmann::json& j, PipelineConfig base = {});

}  // namespace ringseg
