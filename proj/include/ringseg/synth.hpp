#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ringseg/types.hpp"

namespace ringseg {

// Per-action durations in seconds. jitter is a normal stddev added per
// action, drawn from the scenario RNG so repeated actions never share the
// exact same profile; 0 keeps the table exact. Durations never drop below
// min_duration, which stays above the segmenter's 1.0 s changepoint gap so
// both ends of a short action remain individually recoverable.
struct Timing {
  double move = 3.69;
  double short_action = 1.4;  // grasp, extract, release
  double jitter = 0.45;
  double min_duration = 1.05;
};

// Workspace layout. Pegs sit on a 2x3 grid: red/green/blue along y=+peg_dy
// (PSM1's side), yellow/grey at y=-peg_dy. Rings rest at ring_seat_z, seated
// rings stack by stack_dz, and carried rings are released from hover_z above
// the peg tip. All positions are meters.
struct Geometry {
  double peg_dx = 0.08;
  double peg_dy = 0.05;
  double peg_tip_z = 0.009;
  double ring_seat_z = 0.002;
  double stack_dz = 0.004;
  double hover_z = 0.015;
  double ring_radius = 0.01;
  Vec3 base_center = {0.0, 0.0, 0.0};
  Vec3 handover = {0.0, 0.0, 0.03};
  double park_dy = 0.016;  // sideways retreat after a handover release
  double home_y = 0.10;
  double home_z = 0.04;
  double jaw_open = 1.5707963267948966;    // pi/2
  double jaw_closed = 0.19634954084936207;  // pi/16
  double lead_in = 1.2;  // idle seconds before the first action
  double tail = 1.0;     // idle seconds after the last action
};

struct ScriptStep {
  Action action = Action::move_ring;
  Arm arm = Arm::psm1;
  Color ring = Color::red;  // annotated ring color
  enum class Target { ring, peg, center, none } target = Target::none;
  Color target_color = Color::red;
  // Steps sharing a group id run in the same wall-clock window.
  int group = -1;
  // Failure injection: carried ring detaches at this fraction of the motion.
  double drop_fraction = 0.0;
};

struct Scenario {
  std::string name;
  SceneState initial_scene;
  std::vector<ScriptStep> script;
  std::uint64_t rng_seed = 0;
};

// Builds one of the scripted scenarios: "standard" (36 actions),
// "failure" (18), "occupied_pegs" (17), "simultaneous" (12).
// Throws std::invalid_argument for unknown names.
Scenario make_scenario(const std::string& name, std::uint64_t seed,
                       const Geometry& g = {});

// Executes the script into a sampled trace with exact ground-truth
// annotations. Arms move along straight lines with a blended trapezoid
// profile (smooth velocity ramps, zero velocity and acceleration at the
// joins); jaws ramp between open and closed; rings track the gripper while
// held. Throws std::invalid_argument when the script violates its own
// preconditions (grasping away from a ring, extracting empty-handed, ...).
ExecutionTrace generate_trace(const Scenario& scenario, double sample_rate = 50.0,
                              const Timing& timing = {}, const Geometry& g = {});

}  // namespace ringseg
