#include "ringseg/fluents.hpp"

#include <cmath>

namespace ringseg {

namespace {

double dist3(const Vec3& a, const Vec3& b) {
  const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

double dist_xy(const Vec3& a, const Vec3& b) {
  const double dx = a[0] - b[0], dy = a[1] - b[1];
  return std::sqrt(dx * dx + dy * dy);
}

}  // namespace

Fluent Fluent::at_ring(int arm, Color ring) {
  return {Predicate::at_ring, std::int8_t(arm), -1, std::int8_t(ring), -1};
}
Fluent Fluent::at_peg(int arm, Color peg) {
  return {Predicate::at_peg, std::int8_t(arm), -1, std::int8_t(peg), -1};
}
Fluent Fluent::in_hand(int arm, Color ring) {
  return {Predicate::in_hand, std::int8_t(arm), -1, std::int8_t(ring), -1};
}
Fluent Fluent::on(Color ring, Color peg) {
  return {Predicate::on, -1, -1, std::int8_t(ring), std::int8_t(peg)};
}
Fluent Fluent::reachable(int arm, ObjectClass obj, Color color) {
  return {Predicate::reachable, std::int8_t(arm), std::int8_t(obj), std::int8_t(color), -1};
}
Fluent Fluent::closed_gripper(int arm) {
  return {Predicate::closed_gripper, std::int8_t(arm), -1, -1, -1};
}
Fluent Fluent::at_center(int arm) {
  return {Predicate::at_center, std::int8_t(arm), -1, -1, -1};
}

std::string to_string(const Fluent& f) {
  const auto arm = [&] { return std::string(to_string(Arm(f.arm))); };
  const auto ca = [&] { return std::string(to_string(Color(f.color_a))); };
  switch (f.pred) {
    case Predicate::at_ring: return "at(" + arm() + ",ring," + ca() + ")";
    case Predicate::at_peg: return "at(" + arm() + ",peg," + ca() + ")";
    case Predicate::in_hand: return "in_hand(" + arm() + ",ring," + ca() + ")";
    case Predicate::on:
      return "on(ring," + ca() + ",peg," + std::string(to_string(Color(f.color_b))) + ")";
    case Predicate::reachable:
      return "reachable(" + arm() + "," +
             (ObjectClass(f.object) == ObjectClass::ring ? "ring," : "peg,") + ca() + ")";
    case Predicate::closed_gripper: return "closed_gripper(" + arm() + ")";
    case Predicate::at_center: return "at(" + arm() + ",center)";
  }
  return "?";
}

FluentSet compute_fluents(const Frame& frame) {
  FluentSet out;
  const SceneState& sc = frame.scene;
  const double rr = sc.ring_radius;

  for (int a = 0; a < kNumArms; ++a) {
    const ArmState& arm = frame.arms[a];
    const bool closed = arm.jaw < kClosedJawThreshold;
    if (closed) out.insert(Fluent::closed_gripper(a));
    if (dist_xy(arm.pos, sc.base_center) < rr) out.insert(Fluent::at_center(a));
    for (const RingState& r : sc.rings) {
      if (dist3(arm.pos, r.pos) < rr) {
        out.insert(Fluent::at_ring(a, r.color));
        if (closed) out.insert(Fluent::in_hand(a, r.color));
      }
    }
    for (const PegState& p : sc.pegs)
      if (dist3(arm.pos, p.pos) < rr && p.pos[2] < arm.pos[2])
        out.insert(Fluent::at_peg(a, p.color));
  }

  for (const RingState& r : sc.rings)
    for (const PegState& p : sc.pegs)
      if (dist3(r.pos, p.pos) < rr && r.pos[2] < p.pos[2]) out.insert(Fluent::on(r.color, p.color));

  // argmin over arms of |y_object - y_arm|; PSM1 wins exact ties.
  const auto closest_arm = [&](const Vec3& pos) {
    const double d1 = std::abs(pos[1] - frame.arms[0].pos[1]);
    const double d2 = std::abs(pos[1] - frame.arms[1].pos[1]);
    return d2 < d1 ? 1 : 0;
  };
  for (const RingState& r : sc.rings)
    out.insert(Fluent::reachable(closest_arm(r.pos), ObjectClass::ring, r.color));
  for (const PegState& p : sc.pegs)
    out.insert(Fluent::reachable(closest_arm(p.pos), ObjectClass::peg, p.color));

  return out;
}

bool fluents_equal(const FluentSet& a, const FluentSet& b) { return a == b; }

FluentSet strip_reachable(const FluentSet& s) {
  FluentSet out;
  for (const Fluent& f : s)
    if (f.pred != Predicate::reachable) out.insert(f);
  return out;
}

}  // namespace ringseg
