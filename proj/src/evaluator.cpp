#include "ringseg/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "ringseg/features.hpp"
#include "ringseg/knn.hpp"

namespace ringseg {

namespace {

double overlap_length(double a0, double a1, double b0, double b1) {
  return std::max(0.0, std::min(a1, b1) - std::max(a0, b0));
}

std::vector<Annotation> sorted_annotations(const ExecutionTrace& trace) {
  if (!trace.annotations || trace.annotations->empty()) {
    throw std::invalid_argument("evaluate: every trace needs annotations");
  }
  std::vector<Annotation> truth = *trace.annotations;
  std::stable_sort(truth.begin(), truth.end(), [](const Annotation& a, const Annotation& b) {
    if (a.start != b.start) return a.start < b.start;
    return a.end < b.end;
  });
  return truth;
}

}  // namespace

double matching_score(double ident_start, double ident_end, double truth_start,
                      double truth_end) {
  if (!(truth_end > truth_start)) {
    throw std::invalid_argument("matching_score: truth interval has no length");
  }
  return overlap_length(ident_start, ident_end, truth_start, truth_end) /
         (truth_end - truth_start);
}

double matching_score(const Segment& identified, const Annotation& truth) {
  return matching_score(identified.start.t, identified.end.t, truth.start, truth.end);
}

std::vector<int> match_segments(const std::vector<Segment>& identified,
                                const std::vector<Annotation>& truth) {
  std::vector<int> assigned(truth.size(), -1);
  for (size_t g = 0; g < truth.size(); ++g) {
    double best = 0.0;
    for (size_t i = 0; i < identified.size(); ++i) {
      const double ov = overlap_length(identified[i].start.t, identified[i].end.t,
                                       truth[g].start, truth[g].end);
      if (ov > best) {
        best = ov;
        assigned[g] = static_cast<int>(i);
      }
    }
  }
  return assigned;
}

std::map<int, Action> label_segments(const std::vector<Segment>& identified,
                                     const std::vector<Annotation>& truth) {
  std::map<int, Action> labels;
  for (size_t i = 0; i < identified.size(); ++i) {
    double best = 0.0;
    for (const Annotation& ann : truth) {
      const double ov =
          overlap_length(identified[i].start.t, identified[i].end.t, ann.start, ann.end);
      if (ov > best) {
        best = ov;
        labels[static_cast<int>(i)] = ann.action;
      }
    }
  }
  return labels;
}

Prf precision_recall_f1(const RetrievalSet& retrieval,
                        const std::map<int, Action>& truth_labels, Action action,
                        int n_occ) {
  if (n_occ < 0) {
    n_occ = 0;
    for (const auto& [id, a] : truth_labels) n_occ += a == action ? 1 : 0;
  }
  if (n_occ == 0) {
    throw std::invalid_argument(std::string("precision_recall_f1: no occurrences of ") +
                                to_string(action));
  }
  Prf r;
  for (const auto& [id, score] : retrieval.members) {
    const auto it = truth_labels.find(id);
    r.tp += it != truth_labels.end() && it->second == action ? 1 : 0;
  }
  r.fp = static_cast<int>(retrieval.members.size()) - r.tp;
  // A merged segment can serve several truths, so cap the deficit at zero.
  r.fn = std::max(0, n_occ - r.tp);
  r.precision = r.tp + r.fp > 0 ? static_cast<double>(r.tp) / (r.tp + r.fp) : 0.0;
  r.recall = r.tp + r.fn > 0 ? static_cast<double>(r.tp) / (r.tp + r.fn) : 0.0;
  r.f1 = r.precision + r.recall > 0
             ? 2.0 * r.precision * r.recall / (r.precision + r.recall)
             : 0.0;
  return r;
}

EvalReport evaluate(const std::vector<ExecutionTrace>& traces, const PipelineConfig& cfg) {
  if (traces.empty()) throw std::invalid_argument("evaluate: no traces");

  struct ClassState {
    std::vector<double> scores;  // one matching score per occurrence
    double overlap_sum = 0.0;
    double truth_sum = 0.0;
    double duration_sum = 0.0;
    int n_occ = 0;
    int chosen = -1;    // first occurrence matched with score >= 0.5
    int best_id = -1;   // fallback: the highest-scoring matched occurrence
    double best_score = -1.0;
  };
  std::map<Action, ClassState> classes;
  std::vector<SegmentFeatures> dataset;
  std::map<int, Action> labels;

  for (const ExecutionTrace& trace : traces) {
    const std::vector<Annotation> truth = sorted_annotations(trace);
    const std::vector<Segment> segs = segment(trace, cfg.segmenter);
    const int first_id = static_cast<int>(dataset.size());
    for (const Segment& s : segs) dataset.push_back(build_features(trace, s, cfg.features));
    for (const auto& [local, action] : label_segments(segs, truth)) {
      labels[first_id + local] = action;
    }
    const std::vector<int> assigned = match_segments(segs, truth);
    for (size_t g = 0; g < truth.size(); ++g) {
      ClassState& c = classes[truth[g].action];
      const double len = truth[g].end - truth[g].start;
      const double m = assigned[g] < 0 ? 0.0 : matching_score(segs[assigned[g]], truth[g]);
      c.scores.push_back(m);
      c.overlap_sum += m * len;
      c.truth_sum += len;
      c.duration_sum += len;
      c.n_occ += 1;
      if (assigned[g] >= 0) {
        const int id = first_id + assigned[g];
        if (c.chosen < 0 && m >= 0.5) c.chosen = id;
        if (m > c.best_score) {
          c.best_score = m;
          c.best_id = id;
        }
      }
    }
  }

  for (const auto& [action, id] : cfg.exemplars) {
    if (id < 0 || id >= static_cast<int>(dataset.size())) {
      throw std::invalid_argument(std::string("evaluate: pinned exemplar for ") +
                                  to_string(action) + " is not a dataset segment id");
    }
  }

  const MetricContext ctx = compute_metric_context(dataset);
  std::map<Action, int> counts;
  for (const auto& [action, c] : classes) counts[action] = c.n_occ;
  const int shared_k = choose_k(counts);

  EvalReport report;
  ActionScores& avg = report.averages;
  for (const auto& [action, c] : classes) {
    ActionScores s;
    s.n_occ = c.n_occ;
    if (cfg.pool_matching) {
      s.matching = c.truth_sum > 0 ? c.overlap_sum / c.truth_sum : 0.0;
    } else {
      double sum = 0.0;
      for (double m : c.scores) sum += m;
      s.matching = sum / static_cast<double>(c.scores.size());
    }

    int exemplar;
    if (const auto it = cfg.exemplars.find(action); it != cfg.exemplars.end()) {
      exemplar = it->second;
    } else if (c.chosen >= 0) {
      exemplar = c.chosen;
    } else if (c.best_id >= 0) {
      exemplar = c.best_id;
    } else {
      throw std::runtime_error(std::string("evaluate: no identified segment overlaps any ") +
                               to_string(action) + " occurrence");
    }

    FeatureMask mask;
    if (const auto it = cfg.masks.find(action); it != cfg.masks.end()) {
      mask = it->second;
    } else if (c.duration_sum / c.n_occ < cfg.short_action_cutoff) {
      mask = {false, true};
    }

    const int k = std::min(cfg.k > 0 ? cfg.k : shared_k, static_cast<int>(dataset.size()));
    const RetrievalSet p = knn_retrieve(exemplar, dataset, k, ctx, mask);
    const Prf prf = precision_recall_f1(p, labels, action, c.n_occ);
    s.precision = prf.precision;
    s.recall = prf.recall;
    s.f1 = prf.f1;
    report.per_action[action] = s;

    avg.matching += s.matching;
    avg.precision += s.precision;
    avg.recall += s.recall;
    avg.f1 += s.f1;
    avg.n_occ += s.n_occ;
  }
  const double n = static_cast<double>(report.per_action.size());
  avg.matching /= n;
  avg.precision /= n;
  avg.recall /= n;
  avg.f1 /= n;
  return report;
}

nlohmann::json eval_report_to_json(const EvalReport& report) {
  nlohmann::json per_action = nlohmann::json::object();
  for (const auto& [action, s] : report.per_action) {
    per_action[to_string(action)] = {{"matching", s.matching},
                                     {"precision", s.precision},
                                     {"recall", s.recall},
                                     {"f1", s.f1},
                                     {"n_occ", s.n_occ}};
  }
  return nlohmann::json{{"per_action", per_action},
                        {"averages",
                         {{"matching", report.averages.matching},
                          {"precision", report.averages.precision},
                          {"recall", report.averages.recall},
                          {"f1", report.averages.f1}}}};
}

std::string eval_report_to_csv(const EvalReport& report) {
  std::string out = "action,matching,precision,recall,f1,n_occ\n";
  char buf[128];
  const auto row = [&](const char* name, const ActionScores& s) {
    std::snprintf(buf, sizeof buf, "%s,%.2f,%.2f,%.2f,%.2f,%d\n", name, 100.0 * s.matching,
                  100.0 * s.precision, 100.0 * s.recall, 100.0 * s.f1, s.n_occ);
    out += buf;
  };
  for (const auto& [action, s] : report.per_action) row(to_string(action), s);
  row("average", report.averages);
  return out;
}

}  // namespace ringseg
