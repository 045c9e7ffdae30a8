#include "ringseg/pipeline.hpp"

#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

namespace ringseg {

namespace {

using nlohmann::json;

void reject_unknown(const json& j, std::initializer_list<const char*> known,
                    const char* where) {
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) {
      throw std::invalid_argument(std::string(where) + ": unknown key '" + key + "'");
    }
  }
}

json mask_to_json(const FeatureMask& m) {
  return json{{"use_f1", m.use_f1}, {"use_f23", m.use_f23}};
}

FeatureMask mask_from_json(const json& j, FeatureMask base) {
  if (!j.is_object()) throw std::invalid_argument("mask entry: expected an object");
  reject_unknown(j, {"use_f1", "use_f23"}, "mask entry");
  if (j.contains("use_f1")) base.use_f1 = j.at("use_f1").get<bool>();
  if (j.contains("use_f23")) base.use_f23 = j.at("use_f23").get<bool>();
  return base;
}

FeatureConfig features_from_json(const json& j, FeatureConfig base) {
  if (!j.is_object()) throw std::invalid_argument("features config: expected an object");
  reject_unknown(j, {"poly_degree", "move_eps", "var_eps"}, "features config");
  if (j.contains("poly_degree")) base.poly_degree = j.at("poly_degree").get<int>();
  if (j.contains("move_eps")) base.move_eps = j.at("move_eps").get<double>();
  if (j.contains("var_eps")) base.var_eps = j.at("var_eps").get<double>();
  return base;
}

}  // namespace

json pipeline_config_to_json(const PipelineConfig& cfg) {
  json masks = json::object();
  for (const auto& [action, mask] : cfg.masks) masks[to_string(action)] = mask_to_json(mask);
  json exemplars = json::object();
  for (const auto& [action, id] : cfg.exemplars) exemplars[to_string(action)] = id;
  json j{{"segmenter", segmenter_config_to_json(cfg.segmenter)},
         {"features",
          {{"poly_degree", cfg.features.poly_degree},
           {"move_eps", cfg.features.move_eps},
           {"var_eps", cfg.features.var_eps}}},
         {"masks", masks},
         {"short_action_cutoff", cfg.short_action_cutoff},
         {"exemplars", exemplars},
         {"seed", cfg.seed},
         {"pool_matching", cfg.pool_matching}};
  if (cfg.k > 0) {
    j["k"] = cfg.k;
  } else {
    j["k"] = "auto";
  }
  return j;
}

PipelineConfig pipeline_config_from_json(const json& j, PipelineConfig base) {
  if (!j.is_object()) throw std::invalid_argument("pipeline config: expected an object");
  reject_unknown(j,
                 {"segmenter", "features", "masks", "short_action_cutoff", "k", "exemplars",
                  "seed", "pool_matching"},
                 "pipeline config");
  if (j.contains("segmenter")) {
    base.segmenter = segmenter_config_from_json(j.at("segmenter"), base.segmenter);
  }
  if (j.contains("features")) base.features = features_from_json(j.at("features"), base.features);
  if (j.contains("masks")) {
    const json& m = j.at("masks");
    if (!m.is_object()) throw std::invalid_argument("pipeline config: masks must be an object");
    for (const auto& [key, value] : m.items()) {
      const Action action = action_from_string(key);
      const auto it = base.masks.find(action);
      base.masks[action] = mask_from_json(value, it == base.masks.end() ? FeatureMask{} : it->second);
    }
  }
  if (j.contains("short_action_cutoff")) {
    base.short_action_cutoff = j.at("short_action_cutoff").get<double>();
    if (base.short_action_cutoff < 0) {
      throw std::invalid_argument("pipeline config: short_action_cutoff must be non-negative");
    }
  }
  if (j.contains("k")) {
    const json& k = j.at("k");
    if (k.is_string()) {
      if (k.get<std::string>() != "auto") {
        throw std::invalid_argument("pipeline config: k must be a positive integer or \"auto\"");
      }
      base.k = 0;
    } else {
      base.k = k.get<int>();
      if (base.k <= 0) {
        throw std::invalid_argument("pipeline config: k must be a positive integer or \"auto\"");
      }
    }
  }
  if (j.contains("exemplars")) {
    const json& e = j.at("exemplars");
    if (!e.is_object()) throw std::invalid_argument("pipeline config: exemplars must be an object");
    for (const auto& [key, value] : e.items()) {
      const int id = value.get<int>();
      if (id < 0) throw std::invalid_argument("pipeline config: exemplar ids must be non-negative");
      base.exemplars[action_from_string(key)] = id;
    }
  }
  if (j.contains("seed")) base.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("pool_matching")) base.pool_matching = j.at("pool_matching").get<bool>();
  return base;
}

}  // namespace ringseg
