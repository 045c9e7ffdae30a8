#pragma once

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ringseg/pipeline.hpp"
#include "ringseg/segmenter.hpp"
#include "ringseg/types.hpp"

namespace ringseg {

// Fraction of the truth interval covered by the identified one. Throws when
// the truth interval has no length.
double matching_score(double ident_start, double ident_end, double truth_start,
                      double truth_end);
double matching_score(const Segment& identified, const Annotation& truth);

// Index of the identified segment with the largest temporal intersection,
// one entry per truth annotation, -1 when nothing overlaps. Ties go to the
// earlier identified segment; one identified segment may serve several
// truths. Both lists must be sorted by start time.
std::vector<int> match_segments(const std::vector<Segment>& identified,
                                const std::vector<Annotation>& truth);

// Truth label per identified segment index: the action of the annotation
// with the largest intersection (ties toward the earlier annotation).
// Segments overlapping no annotation are absent from the map.
std::map<int, Action> label_segments(const std::vector<Segment>& identified,
                                     const std::vector<Annotation>& truth);

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  int tp = 0;
  int fp = 0;
  int fn = 0;
};

// Confusion arithmetic for one retrieval set: TP counts members whose truth
// label equals `action`, FP the rest, FN the unretrieved occurrences.
// Passing n_occ < 0 counts the action's occurrences in truth_labels; the
// count must end up positive either way.
Prf precision_recall_f1(const RetrievalSet& retrieval,
                        const std::map<int, Action>& truth_labels, Action action,
                        int n_occ = -1);

struct ActionScores {
  double matching = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  int n_occ = 0;
};

struct EvalReport {
  std::map<Action, ActionScores> per_action;
  // Unweighted means over the classes present; n_occ totals them.
  ActionScores averages;
};

// Full scoring pass over an annotated dataset: segments every trace, scores
// boundary recovery per class, builds the segment feature dataset, picks one
// exemplar per class (first occurrence whose matched segment scores >= 0.5,
// else the highest-scoring one, unless pinned in cfg.exemplars), retrieves a
// P set per class and aggregates precision/recall/F1.
EvalReport evaluate(const std::vector<ExecutionTrace>& traces,
                    const PipelineConfig& cfg = {});

nlohmann::json eval_report_to_json(const EvalReport& report);
// One row per class plus the average row; values as percentages with two
// decimals, the layout used throughout the report tables.
std::string eval_report_to_csv(const EvalReport& report);

}  // namespace ringseg
