#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ringseg {

using Vec3 = std::array<double, 3>;
// Quaternion component order follows the trace layout: x, y, z, w.
using Quat = std::array<double, 4>;

enum class Color : std::uint8_t { red, green, blue, yellow, grey };
enum class Action : std::uint8_t { move_ring, move_peg, move_center, grasp, extract, release };
// `both` is only meaningful on annotations; frames always carry exactly two arms.
enum class Arm : std::uint8_t { psm1, psm2, both };

constexpr int kNumArms = 2;
constexpr int kFeaturesPerArm = 8;   // pos(3) + quat(4) + jaw(1)
constexpr int kNumFeatures = 16;

const char* to_string(Color c);
const char* to_string(Action a);
const char* to_string(Arm a);
Color color_from_string(const std::string& s);
Action action_from_string(const std::string& s);
Arm arm_from_string(const std::string& s);

// Raised for malformed trace files and invariant violations; the message names
// the offending frame/annotation index where one exists.
struct TraceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ArmState {
  Vec3 pos{0, 0, 0};
  Quat quat{0, 0, 0, 1};
  double jaw = 0.0;  // radians, in [0, pi]
};

struct RingState {
  Color color = Color::red;
  Vec3 pos{0, 0, 0};  // ring center
};

struct PegState {
  Color color = Color::red;
  Vec3 pos{0, 0, 0};  // peg tip
};

struct SceneState {
  std::vector<RingState> rings;
  std::vector<PegState> pegs;
  Vec3 base_center{0, 0, 0};
  double ring_radius = 0.01;
};

struct Frame {
  double t = 0.0;
  std::array<ArmState, kNumArms> arms;  // [0] = PSM1, [1] = PSM2
  SceneState scene;
};

struct Annotation {
  double start = 0.0;
  double end = 0.0;
  Action action = Action::move_ring;
  Arm arm = Arm::psm1;
  std::optional<Color> color;
};

struct ExecutionTrace {
  double sample_rate = 50.0;
  std::map<std::string, std::string> meta;
  std::vector<Frame> frames;
  std::optional<std::vector<Annotation>> annotations;
};

}  // namespace ringseg
