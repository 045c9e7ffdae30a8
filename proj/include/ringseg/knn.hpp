#pragma once

#include <map>
#include <utility>
#include <vector>

#include "ringseg/features.hpp"

namespace ringseg {

struct FeatureMask {
  bool use_f1 = true;
  bool use_f23 = true;
};

// Dataset-wide normalizers so the two distance families weigh equally.
struct MetricContext {
  double d_emax = 1.0;
  double d_hmax = 1.0;
};

struct RetrievalSet {
  int query = 0;
  std::vector<std::pair<int, double>> members;  // (segment id, score), ascending
  int k = 0;
};

// L2 over all polynomial coefficients.
double euclidean_f1(const SegmentFeatures& a, const SegmentFeatures& b);

// Fraction of differing entries across the concatenated [f2, f3].
double hamming_f23(const SegmentFeatures& a, const SegmentFeatures& b);

// Maximum pairwise distance under each family; zero maxima fall back to 1 so
// an all-identical dataset still yields a usable context.
MetricContext compute_metric_context(const std::vector<SegmentFeatures>& dataset);

// sqrt((d_e/d_emax)^2 + (d_h/d_hmax)^2), or the single normalized term the
// mask leaves enabled.
double mixed_distance(const SegmentFeatures& a, const SegmentFeatures& b,
                      const MetricContext& ctx, const FeatureMask& mask = {});

// All segments ranked by distance to the query (the query itself rides along
// at distance 0), cut at k and widened to include every segment tying the
// k-th score. Equal scores order by segment id. Ids are dataset indexes.
RetrievalSet knn_retrieve(int query, const std::vector<SegmentFeatures>& dataset, int k,
                          const MetricContext& ctx, const FeatureMask& mask = {});

// Occurrence count of the most frequent class.
int choose_k(const std::map<Action, int>& counts);

}  // namespace ringseg
