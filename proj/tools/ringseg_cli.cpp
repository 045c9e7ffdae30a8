#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ringseg/evaluator.hpp"
#include "ringseg/features.hpp"
#include "ringseg/knn.hpp"
#include "ringseg/noise.hpp"
#include "ringseg/pipeline.hpp"
#include "ringseg/segmenter.hpp"
#include "ringseg/synth.hpp"
#include "ringseg/trace.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace ringseg;

namespace {

// Missing inputs exit with 2, everything else that goes wrong with 1.
struct MissingInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json load_input(const fs::path& path) {
  if (!fs::exists(path)) throw MissingInput("no such file: " + path.string());
  return read_json_file(path);
}

void write_text_atomic(const std::string& text, const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out << text;
    if (!out) throw std::runtime_error("write failed for '" + tmp.string() + "'");
  }
  fs::rename(tmp, path);
}

void check_keys(const json& j, std::initializer_list<const char*> known, const char* where) {
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) {
      throw std::invalid_argument(std::string(where) + ": unknown key '" + key + "'");
    }
  }
}

Vec3 vec3_from_json(const json& j, const char* where) {
  if (!j.is_array() || j.size() != 3) {
    throw std::invalid_argument(std::string(where) + ": expected [x, y, z]");
  }
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

Timing timing_from_json(const json& j, Timing base) {
  check_keys(j, {"move", "short_action", "jitter", "min_duration"}, "timing");
  if (j.contains("move")) base.move = j.at("move").get<double>();
  if (j.contains("short_action")) base.short_action = j.at("short_action").get<double>();
  if (j.contains("jitter")) base.jitter = j.at("jitter").get<double>();
  if (j.contains("min_duration")) base.min_duration = j.at("min_duration").get<double>();
  return base;
}

Geometry geometry_from_json(const json& j, Geometry base) {
  check_keys(j,
             {"peg_dx", "peg_dy", "peg_tip_z", "ring_seat_z", "stack_dz", "hover_z",
              "ring_radius", "base_center", "handover", "park_dy", "home_y", "home_z",
              "jaw_open", "jaw_closed", "lead_in", "tail"},
             "geometry");
  if (j.contains("peg_dx")) base.peg_dx = j.at("peg_dx").get<double>();
  if (j.contains("peg_dy")) base.peg_dy = j.at("peg_dy").get<double>();
  if (j.contains("peg_tip_z")) base.peg_tip_z = j.at("peg_tip_z").get<double>();
  if (j.contains("ring_seat_z")) base.ring_seat_z = j.at("ring_seat_z").get<double>();
  if (j.contains("stack_dz")) base.stack_dz = j.at("stack_dz").get<double>();
  if (j.contains("hover_z")) base.hover_z = j.at("hover_z").get<double>();
  if (j.contains("ring_radius")) base.ring_radius = j.at("ring_radius").get<double>();
  if (j.contains("base_center")) base.base_center = vec3_from_json(j.at("base_center"), "geometry.base_center");
  if (j.contains("handover")) base.handover = vec3_from_json(j.at("handover"), "geometry.handover");
  if (j.contains("park_dy")) base.park_dy = j.at("park_dy").get<double>();
  if (j.contains("home_y")) base.home_y = j.at("home_y").get<double>();
  if (j.contains("home_z")) base.home_z = j.at("home_z").get<double>();
  if (j.contains("jaw_open")) base.jaw_open = j.at("jaw_open").get<double>();
  if (j.contains("jaw_closed")) base.jaw_closed = j.at("jaw_closed").get<double>();
  if (j.contains("lead_in")) base.lead_in = j.at("lead_in").get<double>();
  if (j.contains("tail")) base.tail = j.at("tail").get<double>();
  return base;
}

// What one generation run produces: a scenario plus zero or more noisy
// replicas, one per beta.
struct GenerateSpec {
  std::string name;  // output stem, defaults to the scenario name
  std::string scenario = "standard";
  std::uint64_t seed = 0;
  double rate = 50.0;
  Timing timing;
  Geometry geometry;
  std::vector<double> betas;
  NoiseConfig noise;
};

GenerateSpec spec_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("scenario spec: expected an object");
  check_keys(j, {"name", "scenario", "seed", "rate", "timing", "geometry", "noise"},
             "scenario spec");
  GenerateSpec s;
  if (!j.contains("scenario")) {
    throw std::invalid_argument("scenario spec: missing 'scenario'");
  }
  s.scenario = j.at("scenario").get<std::string>();
  if (j.contains("name")) s.name = j.at("name").get<std::string>();
  if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("rate")) s.rate = j.at("rate").get<double>();
  if (j.contains("timing")) s.timing = timing_from_json(j.at("timing"), s.timing);
  if (j.contains("geometry")) s.geometry = geometry_from_json(j.at("geometry"), s.geometry);
  if (j.contains("noise")) {
    const json& n = j.at("noise");
    check_keys(n, {"betas", "beta", "lambda", "low_cut", "seed"}, "noise");
    if (n.contains("betas")) s.betas = n.at("betas").get<std::vector<double>>();
    if (n.contains("beta")) s.betas = {n.at("beta").get<double>()};
    if (n.contains("lambda")) s.noise.lambda = n.at("lambda").get<double>();
    if (n.contains("low_cut")) s.noise.low_cut = n.at("low_cut").get<double>();
    if (n.contains("seed")) s.noise.seed = n.at("seed").get<std::uint64_t>();
  }
  return s;
}

// Flags shared by the analysis subcommands. Precedence: flag > config file
// > built-in default.
struct ConfigFlags {
  std::string config_path;
  std::optional<double> alpha;
  std::optional<int> window;
  std::optional<double> min_gap;
  std::optional<double> cutoff;
  std::optional<int> poly_degree;
  std::string k;  // "", "auto", or a positive integer
  std::optional<std::uint64_t> seed;
};

void add_config_flags(CLI::App* cmd, ConfigFlags& f, bool with_seed = true) {
  cmd->add_option("--config", f.config_path, "pipeline config JSON file");
  cmd->add_option("--alpha", f.alpha, "peak threshold, fraction of the per-feature max");
  cmd->add_option("--window", f.window, "derivative filter window (odd sample count)");
  cmd->add_option("--min-gap", f.min_gap, "minimum seconds between changepoints");
  cmd->add_option("--cutoff", f.cutoff, "low-pass cutoff in Hz");
  cmd->add_option("--poly-degree", f.poly_degree, "polynomial degree of the fit features");
  cmd->add_option("--k", f.k, "neighborhood size, or 'auto'");
  if (with_seed) cmd->add_option("--seed", f.seed, "seed recorded in the effective config");
}

int parse_k(const std::string& s) {
  if (s == "auto") return 0;
  int k = 0;
  try {
    size_t used = 0;
    k = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
  } catch (const std::exception&) {
    throw std::invalid_argument("--k expects a positive integer or 'auto', got '" + s + "'");
  }
  if (k <= 0) throw std::invalid_argument("--k expects a positive integer or 'auto'");
  return k;
}

PipelineConfig resolve_config(const ConfigFlags& f) {
  PipelineConfig cfg;
  if (!f.config_path.empty()) cfg = pipeline_config_from_json(load_input(f.config_path));
  if (f.alpha) cfg.segmenter.alpha = *f.alpha;
  if (f.window) cfg.segmenter.sg_window = *f.window;
  if (f.min_gap) cfg.segmenter.min_gap = *f.min_gap;
  if (f.cutoff) cfg.segmenter.lowpass_cutoff = *f.cutoff;
  if (f.poly_degree) cfg.features.poly_degree = *f.poly_degree;
  if (!f.k.empty()) cfg.k = parse_k(f.k);
  if (f.seed) cfg.seed = *f.seed;
  return cfg;
}

std::vector<Annotation> sorted_annotations_or_empty(const ExecutionTrace& tr) {
  std::vector<Annotation> truth;
  if (tr.annotations) truth = *tr.annotations;
  std::stable_sort(truth.begin(), truth.end(), [](const Annotation& a, const Annotation& b) {
    if (a.start != b.start) return a.start < b.start;
    return a.end < b.end;
  });
  return truth;
}

std::string format_beta(double beta) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", beta);
  return buf;
}

ExecutionTrace make_replica(const ExecutionTrace& base, const GenerateSpec& spec,
                            size_t replica_index) {
  NoiseConfig nc = spec.noise;
  nc.beta = spec.betas[replica_index];
  // Stride past the 16 per-column streams so replicas stay independent.
  nc.seed = spec.noise.seed + 100 * static_cast<std::uint64_t>(replica_index + 1);
  ExecutionTrace noisy = augment_with_noise(base, nc);
  noisy.meta["beta"] = format_beta(nc.beta);
  noisy.meta["noise_seed"] = std::to_string(nc.seed);
  return noisy;
}

// The classification report for one trace: every annotated class gets its
// exemplar retrieved (or the explicit query list when given).
json classification_report(const ExecutionTrace& tr, const PipelineConfig& cfg,
                           const std::vector<int>& explicit_queries,
                           std::vector<Segment>* segs_out = nullptr,
                           std::vector<SegmentFeatures>* ds_out = nullptr) {
  const std::vector<Segment> segs = segment(tr, cfg.segmenter);
  std::vector<SegmentFeatures> ds;
  ds.reserve(segs.size());
  for (const Segment& s : segs) ds.push_back(build_features(tr, s, cfg.features));

  const std::vector<Annotation> truth = sorted_annotations_or_empty(tr);
  std::map<int, Action> labels;
  std::map<Action, int> counts;
  std::map<Action, double> duration_sum;
  std::map<Action, int> exemplar;
  if (!truth.empty()) {
    labels = label_segments(segs, truth);
    const std::vector<int> assigned = match_segments(segs, truth);
    std::map<Action, double> best;
    std::map<Action, int> chosen;
    for (size_t g = 0; g < truth.size(); ++g) {
      const Action a = truth[g].action;
      counts[a] += 1;
      duration_sum[a] += truth[g].end - truth[g].start;
      if (assigned[g] < 0) continue;
      const double m = matching_score(segs[assigned[g]], truth[g]);
      if (!chosen.count(a) && m >= 0.5) chosen[a] = assigned[g];
      if (auto it = best.find(a); it == best.end() || m > it->second) {
        best[a] = m;
        exemplar[a] = assigned[g];
      }
    }
    for (const auto& [a, id] : chosen) exemplar[a] = id;
    for (const auto& [a, id] : cfg.exemplars) {
      if (id < 0 || id >= static_cast<int>(ds.size())) {
        throw std::invalid_argument(std::string("pinned exemplar for ") + to_string(a) +
                                    " is not a segment id of this trace");
      }
      exemplar[a] = id;
    }
  }

  int k = cfg.k;
  if (k <= 0) {
    if (counts.empty()) {
      throw std::invalid_argument("k 'auto' needs an annotated trace; pass --k");
    }
    k = choose_k(counts);
  }
  k = std::min(k, static_cast<int>(ds.size()));

  std::vector<int> queries = explicit_queries;
  if (queries.empty()) {
    if (exemplar.empty()) {
      throw std::invalid_argument("no --query given and the trace has no annotations");
    }
    for (const auto& [a, id] : exemplar) queries.push_back(id);
  }

  const MetricContext ctx = compute_metric_context(ds);
  json query_rows = json::array();
  for (int q : queries) {
    if (q < 0 || q >= static_cast<int>(ds.size())) {
      throw std::invalid_argument("query id " + std::to_string(q) + " is out of range");
    }
    FeatureMask mask;
    json action = nullptr;
    if (const auto it = labels.find(q); it != labels.end()) {
      const Action a = it->second;
      action = to_string(a);
      if (const auto mi = cfg.masks.find(a); mi != cfg.masks.end()) {
        mask = mi->second;
      } else if (duration_sum[a] / counts[a] < cfg.short_action_cutoff) {
        mask = {false, true};
      }
    }
    const RetrievalSet p = knn_retrieve(q, ds, k, ctx, mask);
    json members = json::array();
    for (const auto& [id, score] : p.members) members.push_back(json::array({id, score}));
    query_rows.push_back({{"query_id", q},
                          {"action", action},
                          {"mask", {{"use_f1", mask.use_f1}, {"use_f23", mask.use_f23}}},
                          {"members", members}});
  }
  if (segs_out) *segs_out = segs;
  if (ds_out) *ds_out = std::move(ds);
  return json{{"config", pipeline_config_to_json(cfg)}, {"k", k}, {"queries", query_rows}};
}

json features_dump(const std::vector<Segment>& segs, const std::vector<SegmentFeatures>& ds,
                   const PipelineConfig& cfg) {
  json rows = json::array();
  for (size_t i = 0; i < ds.size(); ++i) {
    rows.push_back({{"start_t", segs[i].start.t},
                    {"end_t", segs[i].end.t},
                    {"f1", ds[i].f1},
                    {"f2", ds[i].f2},
                    {"f3", ds[i].f3},
                    {"arm_order", to_string(ds[i].arm_order)}});
  }
  return json{{"config", pipeline_config_to_json(cfg)}, {"segments", rows}};
}

struct SweepRange {
  int lo = 0;
  int hi = 0;
  int step = 1;
};

SweepRange parse_sweep(const std::string& s) {
  SweepRange r;
  const int n = std::sscanf(s.c_str(), "%d:%d:%d", &r.lo, &r.hi, &r.step);
  if (n < 2 || r.lo < 1 || r.hi < r.lo || r.step < 1) {
    throw std::invalid_argument("--k-sweep expects MIN:MAX[:STEP] with 1 <= MIN <= MAX");
  }
  return r;
}

std::vector<fs::path> collect_traces(const std::vector<std::string>& inputs) {
  std::vector<fs::path> files;
  for (const std::string& in : inputs) {
    const fs::path p(in);
    if (!fs::exists(p)) throw MissingInput("no such file: " + p.string());
    if (fs::is_directory(p)) {
      std::vector<fs::path> found;
      for (const auto& entry : fs::directory_iterator(p)) {
        if (entry.path().extension() == ".json") found.push_back(entry.path());
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else {
      files.push_back(p);
    }
  }
  if (files.empty()) throw std::invalid_argument("no trace files found");
  return files;
}

std::string csv_average_row(const std::string& csv) {
  const size_t pos = csv.rfind("average,");
  return pos == std::string::npos ? "" : csv.substr(pos, csv.find('\n', pos) - pos);
}

// generate: spec file and/or flags -> one trace per scenario/noise replica.
struct GenerateOpts {
  std::string spec_path;
  std::string out = ".";
  std::optional<std::string> scenario;
  std::optional<std::uint64_t> seed;
  std::optional<double> rate;
  std::vector<double> betas;
  std::optional<double> lambda;
};

GenerateSpec resolve_spec(const std::string& spec_path, const GenerateOpts& o) {
  GenerateSpec spec;
  if (!spec_path.empty()) spec = spec_from_json(load_input(spec_path));
  if (o.scenario) spec.scenario = *o.scenario;
  if (o.seed) spec.seed = *o.seed;
  if (o.rate) spec.rate = *o.rate;
  if (!o.betas.empty()) spec.betas = o.betas;
  if (o.lambda) spec.noise.lambda = *o.lambda;
  if (spec.name.empty()) spec.name = spec.scenario;
  return spec;
}

int run_generate(const GenerateOpts& o) {
  const GenerateSpec spec = resolve_spec(o.spec_path, o);
  const Scenario sc = make_scenario(spec.scenario, spec.seed, spec.geometry);
  const ExecutionTrace base = generate_trace(sc, spec.rate, spec.timing, spec.geometry);
  fs::create_directories(o.out);
  save_trace(base, fs::path(o.out) / (spec.name + ".json"));
  for (size_t i = 0; i < spec.betas.size(); ++i) {
    const ExecutionTrace noisy = make_replica(base, spec, i);
    save_trace(noisy,
               fs::path(o.out) / (spec.name + "_b" + format_beta(spec.betas[i]) + ".json"));
  }
  std::printf("wrote %zu trace file(s) to %s\n", spec.betas.size() + 1, o.out.c_str());
  return 0;
}

struct SegmentOpts {
  std::string trace;
  std::string out;
  std::string candidates_out;
  ConfigFlags flags;
};

int run_segment(const SegmentOpts& o) {
  const ExecutionTrace tr = trace_from_json(load_input(o.trace));
  const PipelineConfig cfg = resolve_config(o.flags);
  const std::vector<Segment> segs = segment(tr, cfg.segmenter);
  save_segments(segs, cfg.segmenter, o.out);
  if (!o.candidates_out.empty()) {
    json rows = json::array();
    for (const Changepoint& c : detect_changepoints(tr, cfg.segmenter)) {
      rows.push_back({{"index", c.index},
                      {"t", c.t},
                      {"source_feature", c.source_feature ? json(*c.source_feature) : json()}});
    }
    write_json_atomic(
        json{{"config", segmenter_config_to_json(cfg.segmenter)}, {"candidates", rows}},
        o.candidates_out);
  }
  std::printf("%zu segments -> %s\n", segs.size(), o.out.c_str());
  return 0;
}

struct ClassifyOpts {
  std::string trace;
  std::string out;
  std::string features_out;
  std::vector<int> queries;
  ConfigFlags flags;
};

int run_classify(const ClassifyOpts& o) {
  const ExecutionTrace tr = trace_from_json(load_input(o.trace));
  const PipelineConfig cfg = resolve_config(o.flags);
  std::vector<Segment> segs;
  std::vector<SegmentFeatures> ds;
  const json report = classification_report(tr, cfg, o.queries, &segs, &ds);
  write_json_atomic(report, o.out);
  if (!o.features_out.empty()) {
    write_json_atomic(features_dump(segs, ds, cfg), o.features_out);
  }
  std::printf("%zu queries, k=%d -> %s\n", report.at("queries").size(),
              report.at("k").get<int>(), o.out.c_str());
  return 0;
}

struct EvaluateOpts {
  std::vector<std::string> inputs;
  std::string out;
  std::string k_sweep;
  ConfigFlags flags;
};

int run_evaluate(const EvaluateOpts& o) {
  const std::vector<fs::path> files = collect_traces(o.inputs);
  std::vector<ExecutionTrace> traces;
  traces.reserve(files.size());
  for (const fs::path& f : files) traces.push_back(trace_from_json(read_json_file(f)));
  const PipelineConfig cfg = resolve_config(o.flags);

  const EvalReport rep = evaluate(traces, cfg);
  json out = eval_report_to_json(rep);
  out["config"] = pipeline_config_to_json(cfg);

  if (!o.k_sweep.empty()) {
    const SweepRange range = parse_sweep(o.k_sweep);
    json sweep = json::array();
    std::printf("k,matching,precision,recall,f1\n");
    for (int k = range.lo; k <= range.hi; k += range.step) {
      PipelineConfig ck = cfg;
      ck.k = k;
      const EvalReport rk = evaluate(traces, ck);
      sweep.push_back({{"k", k},
                       {"matching", rk.averages.matching},
                       {"precision", rk.averages.precision},
                       {"recall", rk.averages.recall},
                       {"f1", rk.averages.f1}});
      std::printf("%d,%.4f,%.4f,%.4f,%.4f\n", k, rk.averages.matching, rk.averages.precision,
                  rk.averages.recall, rk.averages.f1);
    }
    out["k_sweep"] = sweep;
  }

  write_json_atomic(out, o.out);
  const std::string csv = eval_report_to_csv(rep);
  write_text_atomic(csv, fs::path(o.out).replace_extension(".csv"));
  std::printf("%s\n", csv_average_row(csv).c_str());
  return 0;
}

struct PipelineOpts {
  std::string spec_path;
  std::string out;
  GenerateOpts gen;
  ConfigFlags flags;
};

int run_pipeline(const PipelineOpts& o) {
  const GenerateSpec spec = resolve_spec(o.spec_path, o.gen);
  const Scenario sc = make_scenario(spec.scenario, spec.seed, spec.geometry);
  const ExecutionTrace base = generate_trace(sc, spec.rate, spec.timing, spec.geometry);
  ConfigFlags flags = o.flags;
  flags.seed = spec.seed;  // the scenario seed doubles as the config echo's
  const PipelineConfig cfg = resolve_config(flags);
  const fs::path dir(o.out);
  fs::create_directories(dir);

  std::vector<std::pair<std::string, ExecutionTrace>> dataset;
  dataset.emplace_back(spec.name, base);
  for (size_t i = 0; i < spec.betas.size(); ++i) {
    dataset.emplace_back(spec.name + "_b" + format_beta(spec.betas[i]),
                         make_replica(base, spec, i));
  }

  std::vector<ExecutionTrace> traces;
  for (const auto& [name, tr] : dataset) {
    save_trace(tr, dir / (name + ".json"));
    save_segments(segment(tr, cfg.segmenter), cfg.segmenter, dir / (name + "_segments.json"));
    traces.push_back(tr);
  }

  write_json_atomic(classification_report(base, cfg, {}),
                    dir / (spec.name + "_classification.json"));

  const EvalReport rep = evaluate(traces, cfg);
  json out = eval_report_to_json(rep);
  out["config"] = pipeline_config_to_json(cfg);
  write_json_atomic(out, dir / "report.json");
  const std::string csv = eval_report_to_csv(rep);
  write_text_atomic(csv, dir / "report.csv");
  std::printf("%s\n", csv_average_row(csv).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ring-transfer action segmentation and identification"};
  app.require_subcommand(1);

  GenerateOpts gen;
  CLI::App* cmd_gen = app.add_subcommand(
      "generate", "synthesize annotated traces, plus one noisy replica per beta");
  cmd_gen->add_option("spec", gen.spec_path, "scenario spec JSON file");
  cmd_gen->add_option("--out", gen.out, "output directory")->capture_default_str();
  cmd_gen->add_option("--scenario", gen.scenario,
                      "standard | failure | occupied_pegs | simultaneous");
  cmd_gen->add_option("--seed", gen.seed, "scenario timing seed");
  cmd_gen->add_option("--rate", gen.rate, "sample rate in Hz");
  cmd_gen->add_option("--beta", gen.betas, "noise amplitude; repeat for several replicas");
  cmd_gen->add_option("--lambda", gen.lambda, "noise spectral exponent");

  SegmentOpts seg;
  CLI::App* cmd_seg = app.add_subcommand("segment", "detect and filter action boundaries");
  cmd_seg->add_option("trace", seg.trace, "trace JSON file")->required();
  cmd_seg->add_option("--out", seg.out, "segments JSON file")->required();
  cmd_seg->add_option("--candidates-out", seg.candidates_out,
                      "also dump the unfiltered changepoint candidates");
  add_config_flags(cmd_seg, seg.flags);

  ClassifyOpts cls;
  CLI::App* cmd_cls = app.add_subcommand("classify", "retrieve nearest segments per query");
  cmd_cls->add_option("trace", cls.trace, "trace JSON file")->required();
  cmd_cls->add_option("--out", cls.out, "classification report JSON file")->required();
  cmd_cls->add_option("--query", cls.queries,
                      "segment id to classify; default: one exemplar per annotated class");
  cmd_cls->add_option("--features-out", cls.features_out, "also dump per-segment features");
  add_config_flags(cmd_cls, cls.flags);

  EvaluateOpts ev;
  CLI::App* cmd_ev = app.add_subcommand("evaluate", "score a dataset against its annotations");
  cmd_ev->add_option("traces", ev.inputs, "trace files or directories of them")->required();
  cmd_ev->add_option("--out", ev.out, "report JSON file (CSV written alongside)")->required();
  cmd_ev->add_option("--k-sweep", ev.k_sweep, "evaluate a range of global k values MIN:MAX[:STEP]");
  add_config_flags(cmd_ev, ev.flags);

  PipelineOpts pipe;
  CLI::App* cmd_pipe = app.add_subcommand(
      "pipeline", "generate, segment, classify and evaluate in one pass");
  cmd_pipe->add_option("spec", pipe.spec_path, "scenario spec JSON file");
  cmd_pipe->add_option("--out", pipe.out, "output directory")->required();
  cmd_pipe->add_option("--scenario", pipe.gen.scenario,
                       "standard | failure | occupied_pegs | simultaneous");
  cmd_pipe->add_option("--seed", pipe.gen.seed, "scenario timing seed");
  cmd_pipe->add_option("--rate", pipe.gen.rate, "sample rate in Hz");
  cmd_pipe->add_option("--beta", pipe.gen.betas, "noise amplitude; repeat for several replicas");
  cmd_pipe->add_option("--lambda", pipe.gen.lambda, "noise spectral exponent");
  add_config_flags(cmd_pipe, pipe.flags, /*with_seed=*/false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_gen->parsed()) return run_generate(gen);
    if (cmd_seg->parsed()) return run_segment(seg);
    if (cmd_cls->parsed()) return run_classify(cls);
    if (cmd_ev->parsed()) return run_evaluate(ev);
    if (cmd_pipe->parsed()) return run_pipeline(pipe);
  } catch (const MissingInput& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
