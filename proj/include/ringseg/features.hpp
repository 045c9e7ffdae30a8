#pragma once

#include <utility>
#include <vector>

#include "ringseg/segmenter.hpp"
#include "ringseg/types.hpp"

namespace ringseg {

// Which arm's kinematic block leads the packed feature vectors. `both` keeps
// the natural PSM1-then-PSM2 layout (also used when neither arm moves).
enum class ArmOrder { psm1_first, psm2_first, both };

const char* to_string(ArmOrder o);
ArmOrder arm_order_from_string(const std::string& s);

struct FeatureConfig {
  int poly_degree = 5;     // n; f1 holds (n+1) coefficients per feature
  double move_eps = 0.02;  // endpoint delta, normalized units
  double var_eps = 0.02;   // in-segment excursion, normalized units
};

struct SegmentFeatures {
  std::vector<double> f1;  // 16 * (n+1) coefficients, constant term first
  std::vector<bool> f2;    // 12: start-frame fluents, two slots per predicate
  std::vector<bool> f3;    // 16: per-feature variation flags
  ArmOrder arm_order = ArmOrder::both;
};

// True iff any of the arm's 8 normalized features differs between the
// segment's endpoints by at least move_eps.
bool arm_moved(const ExecutionTrace& trace, const Segment& seg, int arm,
               const FeatureConfig& cfg = {});

// Per-feature least-squares polynomial fit over seconds since the segment
// start, on the raw (unnormalized) kinematics. A lone moving arm's
// coefficients come first with zeros appended for the idle arm.
std::pair<std::vector<double>, ArmOrder> build_f1(const ExecutionTrace& trace,
                                                  const Segment& seg,
                                                  const FeatureConfig& cfg = {});

// Fluents at the segment's first frame, color-blind, packed two slots per
// predicate in the order [at_ring, at_peg, in_hand, on, closed_gripper,
// at_center]: slot 0 = holds at all, slot 1 = holds twice (both arms, or two
// distinct on-relations). reachable is skipped as it holds everywhere.
std::vector<bool> build_f2(const ExecutionTrace& trace, const Segment& seg);

// Entry per kinematic feature: max in-segment excursion from the segment's
// first frame reaches var_eps (normalized). Blocks follow `order`.
std::vector<bool> build_f3(const ExecutionTrace& trace, const Segment& seg, ArmOrder order,
                           const FeatureConfig& cfg = {});

SegmentFeatures build_features(const ExecutionTrace& trace, const Segment& seg,
                               const FeatureConfig& cfg = {});

}  // namespace ringseg
