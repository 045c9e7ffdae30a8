#pragma once

#include <compare>
#include <cstdint>
#include <set>
#include <string>

#include "ringseg/types.hpp"

namespace ringseg {

enum class Predicate : std::uint8_t {
  at_ring,
  at_peg,
  in_hand,
  on,
  reachable,
  closed_gripper,
  at_center,
};

enum class ObjectClass : std::uint8_t { ring, peg };

// A ground atom. Unused argument slots stay at -1 so default comparison gives
// a total order over well-formed atoms of any predicate.
struct Fluent {
  Predicate pred = Predicate::at_ring;
  std::int8_t arm = -1;      // 0 = psm1, 1 = psm2
  std::int8_t object = -1;   // ObjectClass, reachable only
  std::int8_t color_a = -1;  // ring color (at/in_hand/on) or object color (reachable/at_peg)
  std::int8_t color_b = -1;  // peg color, on only

  auto operator<=>(const Fluent&) const = default;

  static Fluent at_ring(int arm, Color ring);
  static Fluent at_peg(int arm, Color peg);
  static Fluent in_hand(int arm, Color ring);
  static Fluent on(Color ring, Color peg);
  static Fluent reachable(int arm, ObjectClass obj, Color color);
  static Fluent closed_gripper(int arm);
  static Fluent at_center(int arm);
};

using FluentSet = std::set<Fluent>;

// Textual form used in logs and JSON, e.g. "at(psm1,ring,red)",
// "on(ring,blue,peg,red)", "at(psm2,center)".
std::string to_string(const Fluent& f);

// The jaw angle below which a gripper counts as closed.
constexpr double kClosedJawThreshold = 0.39269908169872414;  // pi/8

// Evaluates the seven rule bodies over one frame. All comparisons are strict;
// reachable ties go to PSM1 and exactly one reachable atom is emitted per
// scene object.
FluentSet compute_fluents(const Frame& frame);

bool fluents_equal(const FluentSet& a, const FluentSet& b);

// Copy of `s` without reachable atoms (changepoint-filtering sensitivity knob).
FluentSet strip_reachable(const FluentSet& s);

}  // namespace ringseg
