#include "ringseg/features.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "ringseg/fluents.hpp"
#include "ringseg/signal.hpp"
#include "ringseg/trace.hpp"

namespace ringseg {

namespace {

void check_inputs(const ExecutionTrace& trace, const Segment& seg, const FeatureConfig& cfg) {
  if (cfg.poly_degree < 1) throw std::invalid_argument("features: poly_degree must be >= 1");
  if (!(cfg.move_eps > 0.0) || !(cfg.var_eps > 0.0)) {
    throw std::invalid_argument("features: move_eps and var_eps must be > 0");
  }
  const int n = static_cast<int>(trace.frames.size());
  if (seg.start.index < 0 || seg.end.index >= n || seg.start.index >= seg.end.index) {
    throw std::invalid_argument("features: segment out of range");
  }
}

bool moved_on(const Eigen::MatrixXd& norm, const Segment& seg, int arm, double eps) {
  for (int f = arm * kFeaturesPerArm; f < (arm + 1) * kFeaturesPerArm; ++f) {
    if (std::abs(norm(seg.end.index, f) - norm(seg.start.index, f)) >= eps) return true;
  }
  return false;
}

ArmOrder pick_order(const Eigen::MatrixXd& norm, const Segment& seg, double eps) {
  const bool m1 = moved_on(norm, seg, 0, eps);
  const bool m2 = moved_on(norm, seg, 1, eps);
  if (m1 == m2) return ArmOrder::both;
  return m1 ? ArmOrder::psm1_first : ArmOrder::psm2_first;
}

// Least-squares coefficients, constant term first, over t - t_start.
Eigen::MatrixXd fit_block(const ExecutionTrace& trace, const Segment& seg, int degree) {
  const int rows = seg.end.index - seg.start.index + 1;
  if (rows < degree + 1) {
    throw std::invalid_argument("features: segment has fewer samples than coefficients");
  }
  const Eigen::MatrixXd raw = kinematic_matrix(trace);
  const double t0 = trace.frames[static_cast<size_t>(seg.start.index)].t;
  Eigen::MatrixXd a(rows, degree + 1);
  for (int i = 0; i < rows; ++i) {
    const double tau = trace.frames[static_cast<size_t>(seg.start.index + i)].t - t0;
    double p = 1.0;
    for (int j = 0; j <= degree; ++j) {
      a(i, j) = p;
      p *= tau;
    }
  }
  const Eigen::MatrixXd y = raw.middleRows(seg.start.index, rows);
  // QR on the design matrix directly; raw powers of long segments square the
  // condition number if pushed through normal equations.
  return a.colPivHouseholderQr().solve(y);  // (degree+1) x 16
}

}  // namespace

const char* to_string(ArmOrder o) {
  switch (o) {
    case ArmOrder::psm1_first: return "psm1_first";
    case ArmOrder::psm2_first: return "psm2_first";
    case ArmOrder::both: return "both";
  }
  return "both";
}

ArmOrder arm_order_from_string(const std::string& s) {
  if (s == "psm1_first") return ArmOrder::psm1_first;
  if (s == "psm2_first") return ArmOrder::psm2_first;
  if (s == "both") return ArmOrder::both;
  throw std::invalid_argument("unknown arm order '" + s + "'");
}

bool arm_moved(const ExecutionTrace& trace, const Segment& seg, int arm,
               const FeatureConfig& cfg) {
  check_inputs(trace, seg, cfg);
  if (arm < 0 || arm >= kNumArms) throw std::invalid_argument("features: arm out of range");
  return moved_on(normalize_features(kinematic_matrix(trace)), seg, arm, cfg.move_eps);
}

std::pair<std::vector<double>, ArmOrder> build_f1(const ExecutionTrace& trace,
                                                  const Segment& seg, const FeatureConfig& cfg) {
  check_inputs(trace, seg, cfg);
  const ArmOrder order =
      pick_order(normalize_features(kinematic_matrix(trace)), seg, cfg.move_eps);
  const Eigen::MatrixXd coeff = fit_block(trace, seg, cfg.poly_degree);

  const int per_arm = (cfg.poly_degree + 1) * kFeaturesPerArm;
  std::vector<double> f1(static_cast<size_t>(2 * per_arm), 0.0);
  auto emit_arm = [&](int arm, int offset) {
    for (int f = 0; f < kFeaturesPerArm; ++f) {
      for (int j = 0; j <= cfg.poly_degree; ++j) {
        f1[static_cast<size_t>(offset + f * (cfg.poly_degree + 1) + j)] =
            coeff(j, arm * kFeaturesPerArm + f);
      }
    }
  };
  switch (order) {
    case ArmOrder::psm1_first: emit_arm(0, 0); break;         // PSM2 half stays zero
    case ArmOrder::psm2_first: emit_arm(1, 0); break;
    case ArmOrder::both:
      emit_arm(0, 0);
      emit_arm(1, per_arm);
      break;
  }
  return {std::move(f1), order};
}

std::vector<bool> build_f2(const ExecutionTrace& trace, const Segment& seg) {
  check_inputs(trace, seg, FeatureConfig{});
  const FluentSet fluents = compute_fluents(trace.frames[static_cast<size_t>(seg.start.index)]);

  int per_arm_counts[5][2] = {};  // at_ring, at_peg, in_hand, closed_gripper, at_center
  int on_count = 0;
  for (const Fluent& f : fluents) {
    switch (f.pred) {
      case Predicate::at_ring: per_arm_counts[0][f.arm] = 1; break;
      case Predicate::at_peg: per_arm_counts[1][f.arm] = 1; break;
      case Predicate::in_hand: per_arm_counts[2][f.arm] = 1; break;
      case Predicate::closed_gripper: per_arm_counts[3][f.arm] = 1; break;
      case Predicate::at_center: per_arm_counts[4][f.arm] = 1; break;
      case Predicate::on: ++on_count; break;
      case Predicate::reachable: break;  // holds at every frame, carries no signal
    }
  }

  std::vector<bool> f2(12, false);
  // Predicate order: at_ring, at_peg, in_hand, on, closed_gripper, at_center.
  const int counts[6] = {per_arm_counts[0][0] + per_arm_counts[0][1],
                         per_arm_counts[1][0] + per_arm_counts[1][1],
                         per_arm_counts[2][0] + per_arm_counts[2][1],
                         on_count,
                         per_arm_counts[3][0] + per_arm_counts[3][1],
                         per_arm_counts[4][0] + per_arm_counts[4][1]};
  for (int p = 0; p < 6; ++p) {
    f2[static_cast<size_t>(2 * p)] = counts[p] >= 1;
    f2[static_cast<size_t>(2 * p + 1)] = counts[p] >= 2;
  }
  return f2;
}

std::vector<bool> build_f3(const ExecutionTrace& trace, const Segment& seg, ArmOrder order,
                           const FeatureConfig& cfg) {
  check_inputs(trace, seg, cfg);
  const Eigen::MatrixXd norm = normalize_features(kinematic_matrix(trace));

  std::vector<bool> natural(kNumFeatures, false);
  for (int f = 0; f < kNumFeatures; ++f) {
    const double ref = norm(seg.start.index, f);
    for (int i = seg.start.index; i <= seg.end.index; ++i) {
      if (std::abs(norm(i, f) - ref) >= cfg.var_eps) {
        natural[static_cast<size_t>(f)] = true;
        break;
      }
    }
  }
  if (order != ArmOrder::psm2_first) return natural;
  std::vector<bool> swapped(kNumFeatures);
  for (int f = 0; f < kFeaturesPerArm; ++f) {
    swapped[static_cast<size_t>(f)] = natural[static_cast<size_t>(kFeaturesPerArm + f)];
    swapped[static_cast<size_t>(kFeaturesPerArm + f)] = natural[static_cast<size_t>(f)];
  }
  return swapped;
}

SegmentFeatures build_features(const ExecutionTrace& trace, const Segment& seg,
                               const FeatureConfig& cfg) {
  SegmentFeatures out;
  auto [f1, order] = build_f1(trace, seg, cfg);
  out.f1 = std::move(f1);
  out.arm_order = order;
  out.f2 = build_f2(trace, seg);
  out.f3 = build_f3(trace, seg, order, cfg);
  return out;
}

}  // namespace ringseg
