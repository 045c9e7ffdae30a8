#include "ringseg/knn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ringseg {

double euclidean_f1(const SegmentFeatures& a, const SegmentFeatures& b) {
  if (a.f1.size() != b.f1.size()) {
    throw std::invalid_argument("knn: f1 length mismatch");
  }
  double sum = 0.0;
  for (size_t i = 0; i < a.f1.size(); ++i) {
    const double d = a.f1[i] - b.f1[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

double hamming_f23(const SegmentFeatures& a, const SegmentFeatures& b) {
  if (a.f2.size() != b.f2.size() || a.f3.size() != b.f3.size()) {
    throw std::invalid_argument("knn: boolean feature length mismatch");
  }
  int diff = 0;
  for (size_t i = 0; i < a.f2.size(); ++i) diff += a.f2[i] != b.f2[i];
  for (size_t i = 0; i < a.f3.size(); ++i) diff += a.f3[i] != b.f3[i];
  return static_cast<double>(diff) / static_cast<double>(a.f2.size() + a.f3.size());
}

MetricContext compute_metric_context(const std::vector<SegmentFeatures>& dataset) {
  if (dataset.size() < 2) {
    throw std::invalid_argument("knn: metric context needs at least 2 segments");
  }
  MetricContext ctx{0.0, 0.0};
  for (size_t i = 0; i < dataset.size(); ++i) {
    for (size_t j = i + 1; j < dataset.size(); ++j) {
      ctx.d_emax = std::max(ctx.d_emax, euclidean_f1(dataset[i], dataset[j]));
      ctx.d_hmax = std::max(ctx.d_hmax, hamming_f23(dataset[i], dataset[j]));
    }
  }
  if (ctx.d_emax <= 0.0) ctx.d_emax = 1.0;
  if (ctx.d_hmax <= 0.0) ctx.d_hmax = 1.0;
  return ctx;
}

double mixed_distance(const SegmentFeatures& a, const SegmentFeatures& b,
                      const MetricContext& ctx, const FeatureMask& mask) {
  if (!mask.use_f1 && !mask.use_f23) {
    throw std::invalid_argument("knn: mask disables every feature family");
  }
  if (!(ctx.d_emax > 0.0) || !(ctx.d_hmax > 0.0)) {
    throw std::invalid_argument("knn: metric context must be positive");
  }
  if (!mask.use_f1) return hamming_f23(a, b) / ctx.d_hmax;
  if (!mask.use_f23) return euclidean_f1(a, b) / ctx.d_emax;
  const double de = euclidean_f1(a, b) / ctx.d_emax;
  const double dh = hamming_f23(a, b) / ctx.d_hmax;
  return std::sqrt(de * de + dh * dh);
}

RetrievalSet knn_retrieve(int query, const std::vector<SegmentFeatures>& dataset, int k,
                          const MetricContext& ctx, const FeatureMask& mask) {
  const int n = static_cast<int>(dataset.size());
  if (query < 0 || query >= n) throw std::invalid_argument("knn: query id out of range");
  if (k < 1 || k > n) throw std::invalid_argument("knn: k out of range");

  std::vector<std::pair<double, int>> ranked;
  ranked.reserve(dataset.size());
  for (int i = 0; i < n; ++i) {
    ranked.emplace_back(mixed_distance(dataset[static_cast<size_t>(query)],
                                       dataset[static_cast<size_t>(i)], ctx, mask),
                        i);
  }
  std::sort(ranked.begin(), ranked.end());

  // P set: the top k plus everything tying the k-th score.
  size_t cut = static_cast<size_t>(k);
  while (cut < ranked.size() && ranked[cut].first == ranked[static_cast<size_t>(k) - 1].first) {
    ++cut;
  }

  RetrievalSet out;
  out.query = query;
  out.k = k;
  out.members.reserve(cut);
  for (size_t i = 0; i < cut; ++i) out.members.emplace_back(ranked[i].second, ranked[i].first);
  return out;
}

int choose_k(const std::map<Action, int>& counts) {
  if (counts.empty()) throw std::invalid_argument("knn: no class counts");
  int best = 0;
  for (const auto& [action, count] : counts) best = std::max(best, count);
  if (best < 1) throw std::invalid_argument("knn: class counts must be positive");
  return best;
}

}  // namespace ringseg
