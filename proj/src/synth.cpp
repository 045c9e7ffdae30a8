#include "ringseg/synth.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

#include "ringseg/trace.hpp"

namespace ringseg {

namespace {

// Motion shaping constants. Moves idle briefly before departing so their
// first acceleration peak stays close to the annotated boundary; blend times
// chase a common peak acceleration so no move's peaks dwarf another's under
// the relative peak threshold downstream.
constexpr double kRefAccel = 0.17;       // m/s^2
constexpr double kMoveLeadPause = 0.15;  // s of stillness opening each move
// Short actions draw their internal profile per occurrence, so no two share
// the exact same curve. One hard envelope applies: the jaw crossing (or the
// ring leaving its seat) flips scene fluents, so from that moment until the
// end of the action every acceleration event is a changepoint candidate that
// differs from the boundary state, and one landing >= 1.0 s after the kept
// boundary changepoint would survive the filter and split the action. The
// boundary changepoint can anticipate the annotation by up to half a move
// blend (~0.3 s), so all mid-action events end by kEventCap.
constexpr double kEventCap = 0.65;       // s, latest mid-action event offset
constexpr double kJawLead = 0.08;        // s, earliest crossing ramp start
constexpr double kPreLead = 0.06;        // s, start of a pre-adjustment ramp
// Jaw ramps chase a peak acceleration drawn from this band, the same way
// moves chase kRefAccel: widths then follow from the swing size, and every
// jaw peak stays within ~1.6x of the largest, safely over the relative peak
// threshold downstream.
constexpr double kJawAccelLo = 40.0;  // rad/s^2
constexpr double kJawAccelHi = 65.0;
constexpr double kJawRampCap = 0.45;     // s, widest jaw ramp
constexpr double kReleaseLeadHi = 0.30;  // s, keeps the first ramp peak near t0
constexpr double kOpenLo = 0.80;         // rad, partial open levels
constexpr double kClosedLo = 0.08;       // rad, closed level range
constexpr double kClosedHi = 0.28;
constexpr double kWiggleLift = 0.05;     // rad, regrip reopens at least this far
constexpr double kWiggleHi = 0.34;       // rad, regrip peak, safely under pi/8
constexpr double kHesitateLo = 0.55;     // rad, release pauses partway open
constexpr double kHesitateHi = 0.85;
constexpr double kExtractStartFrac = 0.02;
constexpr double kStageLo = 0.5;         // fraction of the lift in stage one
constexpr double kStageHi = 0.65;
constexpr double kRetreatStartLo = 0.25;  // s, release retreat onset offset
constexpr double kRetreatStartHi = 0.40;
constexpr double kShortActionCap = 2.4;  // s, ceiling for jittered short actions
constexpr double kExtractLift = 0.03;   // m
constexpr double kRetreatUp = 0.012;    // m
constexpr double kRetreatDrift = 0.01;  // m sideways, anchors the release end
constexpr double kRollStep = 0.2;      // wrist roll per move, rad
// The roll rides in a short flick inside the arrival deceleration. Quaternion
// w is cos(roll/2), so even a tiny roll ramp puts curvature peaks mid-ramp,
// and the per-column relative peak threshold downstream promotes them no
// matter how small the excursion is. Keeping the flick behind the blend's
// deceleration peak (half the widest blend before arrival) parks those peaks
// within the filter's minimum gap of the junction changepoint; starting it
// any earlier steals the boundary and widens its anticipation, and a
// whole-move ramp would seed splits in long moves.
constexpr double kFlickLead = 0.30;  // s before arrival the flick may start
constexpr double kFlickEnd = 0.05;   // s before arrival the flick is done
constexpr double kClosedJaw = 0.39269908169872414;  // pi/8, gripper threshold

double mj(double u) { return ((6.0 * u - 15.0) * u + 10.0) * u * u * u; }
double mj_integral(double u) { return ((u - 3.0) * u + 2.5) * u * u * u * u; }

// mj is strictly increasing on [0,1]; plain bisection suffices.
double mj_inverse(double target) {
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mj(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Velocity profile: min-jerk ramp of width tb, cruise, symmetric ramp-down.
// Zero velocity and acceleration at both ends; |accel| peaks tb/2 from them.
struct Blend {
  double dur = 0.0;
  double tb = 0.0;
  double vpn = 0.0;  // peak velocity for unit distance
};

Blend make_blend(double dist, double dur) {
  Blend b;
  b.dur = dur;
  const double hi = std::min(dur / 2.0, 0.6);
  const double lo = std::min(0.12, hi);
  b.tb = hi;
  for (int i = 0; i < 8; ++i) {
    const double vp = dist / (dur - b.tb);
    b.tb = std::clamp(1.875 * vp / kRefAccel, lo, hi);
  }
  b.vpn = 1.0 / (dur - b.tb);
  return b;
}

double blend_s(const Blend& b, double tau) {
  if (tau <= 0.0) return 0.0;
  if (tau >= b.dur) return 1.0;
  if (tau < b.tb) return b.vpn * b.tb * mj_integral(tau / b.tb);
  if (tau <= b.dur - b.tb) return b.vpn * (tau - b.tb / 2.0);
  return 1.0 - b.vpn * b.tb * mj_integral((b.dur - tau) / b.tb);
}

struct Prim {
  double t0 = 0.0, t1 = 0.0;
  Vec3 from{}, to{};
  Blend blend;
  double roll0 = 0.0, roll1 = 0.0;
  double rt0 = 0.0, rt1 = 0.0;  // roll window, inside [t0, t1]
};

struct JawRamp {
  double t0 = 0.0, t1 = 0.0;
  double from = 0.0, to = 0.0;
};

// carrier >= 0: ring starts tracking that arm; carrier -1: ring comes to
// rest at `rest` (released onto a seat, or fallen).
struct RingEvent {
  double t = 0.0;
  int ring = -1;
  int carrier = -1;
  Vec3 rest{};
};

int arm_index(Arm a) { return a == Arm::psm2 ? 1 : 0; }

double dist3(const Vec3& a, const Vec3& b) {
  const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

double dist_xy(const Vec3& a, const Vec3& b) {
  const double dx = a[0] - b[0], dy = a[1] - b[1];
  return std::sqrt(dx * dx + dy * dy);
}

class Executor {
 public:
  Executor(const Scenario& sc, const Timing& tm, const Geometry& g)
      : sc_(sc), tm_(tm), g_(g), rng_(sc.rng_seed) {
    arm_pos_[0] = {0.0, g_.home_y, g_.home_z};
    arm_pos_[1] = {0.0, -g_.home_y, g_.home_z};
    arm_jaw_[0] = arm_jaw_[1] = g_.jaw_open;

    for (size_t i = 0; i < sc.initial_scene.rings.size(); ++i) {
      const RingState& r = sc.initial_scene.rings[i];
      ring_index_[r.color] = static_cast<int>(i);
      ring_pos_.push_back(r.pos);
      carrier_.push_back(-1);
      seated_on_.push_back(-1);
    }
    seat_count_.assign(sc.initial_scene.pegs.size(), 0);
    for (size_t p = 0; p < sc.initial_scene.pegs.size(); ++p) {
      peg_index_[sc.initial_scene.pegs[p].color] = static_cast<int>(p);
      for (size_t r = 0; r < ring_pos_.size(); ++r) {
        if (dist_xy(ring_pos_[r], sc.initial_scene.pegs[p].pos) < g_.ring_radius) {
          seated_on_[r] = static_cast<int>(p);
          ++seat_count_[p];
        }
      }
    }
  }

  ExecutionTrace run(double rate) {
    double t = g_.lead_in;
    size_t i = 0;
    while (i < sc_.script.size()) {
      size_t j = i + 1;
      while (j < sc_.script.size() && sc_.script[i].group >= 0 &&
             sc_.script[j].group == sc_.script[i].group) {
        ++j;
      }
      const double dur = sample_duration(sc_.script[i].action);
      for (size_t k = i; k < j; ++k) exec_step(sc_.script[k], t, dur, k);
      t += dur;
      i = j;
    }
    std::sort(events_.begin(), events_.end(),
              [](const RingEvent& a, const RingEvent& b) { return a.t < b.t; });
    return sample(t + g_.tail, rate);
  }

 private:
  [[noreturn]] void bail(size_t step, const std::string& what) const {
    throw std::invalid_argument("scenario '" + sc_.name + "': step " +
                                std::to_string(step) + ": " + what);
  }

  double sample_duration(Action a) {
    const bool is_move =
        a == Action::move_ring || a == Action::move_peg || a == Action::move_center;
    if (!is_move) {
      // Uniform over the legal band. A clamped gaussian piles a fifth of the
      // draws onto min_duration exactly, and equal durations give short
      // actions coinciding fit windows downstream.
      const double lo = tm_.min_duration;
      const double hi = std::max(lo, std::min(kShortActionCap,
                                              tm_.short_action + 2.0 * tm_.jitter));
      return uni(lo, hi);
    }
    double d = tm_.move;
    if (tm_.jitter > 0.0) {
      std::normal_distribution<double> n(0.0, tm_.jitter);
      d += n(rng_);
    }
    return std::max(d, tm_.min_duration);
  }

  int ring_of(Color c, size_t step) const {
    const auto it = ring_index_.find(c);
    if (it == ring_index_.end()) bail(step, std::string("no ring of color ") + to_string(c));
    return it->second;
  }

  int peg_of(Color c, size_t step) const {
    const auto it = peg_index_.find(c);
    if (it == peg_index_.end()) bail(step, std::string("no peg of color ") + to_string(c));
    return it->second;
  }

  Vec3 current_ring_pos(int ring) const {
    return carrier_[ring] >= 0 ? arm_pos_[carrier_[ring]] : ring_pos_[ring];
  }

  // Emits a straight-line motion inside [t0, t1]; returns the blend so
  // callers can place mid-flight events. Zero-length requests emit nothing.
  const Prim* emit_motion(int arm, double t0, double t1, const Vec3& to, bool roll) {
    const double dist = dist3(arm_pos_[arm], to);
    if (dist < 1e-12) return nullptr;
    Prim p;
    p.t0 = t0;
    p.t1 = t1;
    p.from = arm_pos_[arm];
    p.to = to;
    p.blend = make_blend(dist, t1 - t0);
    p.roll0 = arm_roll_[arm];
    if (roll) {
      arm_roll_[arm] += (move_count_[arm] % 2 == 0) ? kRollStep : -kRollStep;
      ++move_count_[arm];
    }
    p.roll1 = arm_roll_[arm];
    p.rt0 = std::max(t0, t1 - kFlickLead);
    p.rt1 = std::max(p.rt0, t1 - kFlickEnd);
    arm_pos_[arm] = to;
    prims_[arm].push_back(p);
    return &prims_[arm].back();
  }

  double uni(double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    return u(rng_);
  }

  // Width of a min-jerk jaw swing of size |delta| whose peak acceleration
  // (10/sqrt(3) * delta / width^2) lands in the common band.
  double jaw_width(double delta) {
    const double peak = uni(kJawAccelLo, kJawAccelHi);
    return std::min(kJawRampCap, std::sqrt(5.7735 * std::abs(delta) / peak));
  }

  // One min-jerk jaw ramp from the arm's current level to `to`, spanning
  // [start, start + width]. Returns a copy: the caller may query the crossing
  // time without holding a reference into the growing ramp vector.
  JawRamp push_jaw(int arm, double start, double width, double to) {
    JawRamp r{start, start + width, arm_jaw_[arm], to};
    jaws_[arm].push_back(r);
    arm_jaw_[arm] = to;
    return r;
  }

  // Jaw value crosses the gripper-closed threshold partway through the ramp.
  double jaw_crossing(const JawRamp& r) const {
    const double frac = (r.from - kClosedJaw) / (r.from - r.to);
    return r.t0 + mj_inverse(frac) * (r.t1 - r.t0);
  }

  void exec_step(const ScriptStep& s, double t0, double dur, size_t k) {
    const int arm = arm_index(s.arm);
    const double t1 = t0 + dur;

    switch (s.action) {
      case Action::move_ring: {
        const int ring = ring_of(s.target_color, k);
        if (carrier_[ring] >= 0) bail(k, "target ring is being carried");
        emit_motion(arm, t0 + kMoveLeadPause, t1, ring_pos_[ring], true);
        break;
      }
      case Action::move_center: {
        emit_motion(arm, t0 + kMoveLeadPause, t1, g_.handover, true);
        break;
      }
      case Action::move_peg: {
        const int ring = ring_of(s.ring, k);
        if (carrier_[ring] != arm) bail(k, "move_peg without holding the ring");
        const Vec3 peg = sc_.initial_scene.pegs[static_cast<size_t>(peg_of(s.target_color, k))].pos;
        const Vec3 target = {peg[0], peg[1], g_.hover_z};
        const double m0 = t0 + kMoveLeadPause;
        const Prim* p = emit_motion(arm, m0, t1, target, true);
        if (s.drop_fraction > 0.0 && p != nullptr) {
          const double tf = m0 + s.drop_fraction * (t1 - m0);
          const double sfrac = blend_s(p->blend, tf - m0);
          Vec3 rest;
          for (int d = 0; d < 3; ++d) rest[d] = p->from[d] + (p->to[d] - p->from[d]) * sfrac;
          rest[2] = g_.ring_seat_z;
          events_.push_back({tf, ring, -1, rest});
          carrier_[ring] = -1;
          ring_pos_[ring] = rest;
        }
        break;
      }
      case Action::grasp: {
        const int ring = ring_of(s.ring, k);
        if (carrier_[ring] == arm) bail(k, "grasp of a ring already held");
        if (dist3(arm_pos_[arm], current_ring_pos(ring)) >= g_.ring_radius) {
          bail(k, "grasp with the gripper away from the ring");
        }
        const double closed = uni(kClosedLo, kClosedHi);
        // Often widen the grip a little first. The extra swing stays above
        // the threshold, so the filter drops its peaks as fluent-equal.
        double lead = kJawLead;
        if (uni(0.0, 1.0) < 0.6 && arm_jaw_[arm] + kWiggleLift < g_.jaw_open) {
          const double wider =
              std::min(g_.jaw_open, arm_jaw_[arm] + uni(kWiggleLift, 0.15));
          const double wp = jaw_width(wider - arm_jaw_[arm]);
          push_jaw(arm, t0 + kPreLead, wp, wider);
          lead = kPreLead + wp + 0.03;
        }
        const double w = std::min(jaw_width(arm_jaw_[arm] - closed), kEventCap - lead);
        const double start = uni(lead, kEventCap - w);
        events_.push_back(
            {jaw_crossing(push_jaw(arm, t0 + start, w, closed)), ring, arm, {}});
        // Occasional regrip: reopen part way and squeeze again. The peak stays
        // under the gripper threshold so no fluent flips mid-hold.
        if (uni(0.0, 1.0) < 0.5) {
          const double wpeak = uni(closed + kWiggleLift, kWiggleHi);
          const double ww = jaw_width(wpeak - closed);
          const double wlo = start + w + 0.04;
          if (wlo + 2.0 * ww < kEventCap) {
            const double ws = uni(wlo, kEventCap - 2.0 * ww);
            push_jaw(arm, t0 + ws, ww, wpeak);
            push_jaw(arm, t0 + ws + ww, ww, closed);
          }
        }
        if (seated_on_[ring] >= 0) {
          --seat_count_[seated_on_[ring]];
          seated_on_[ring] = -1;
        }
        carrier_[ring] = arm;
        ring_pos_[ring] = arm_pos_[arm];
        break;
      }
      case Action::extract: {
        const int ring = ring_of(s.ring, k);
        if (carrier_[ring] != arm) bail(k, "extract without holding the ring");
        const double e0 = kExtractStartFrac * dur;
        // Clear the peg in two pulls with a pause between them. The ring
        // leaves its seat early in the first pull, which starts the envelope
        // clock just like a jaw crossing, so both pulls finish inside
        // kEventCap. Pull widths keep the vertical peaks within a 2x band so
        // none falls under the relative peak threshold.
        const double w1 = uni(0.22, 0.28);
        const double dwell = uni(0.05, 0.08);
        const double w2 = uni(0.20, 0.26);
        Vec3 mid = arm_pos_[arm];
        mid[2] += uni(kStageLo, kStageHi) * kExtractLift;
        Vec3 up = arm_pos_[arm];
        up[2] += kExtractLift;
        emit_motion(arm, t0 + e0, t0 + e0 + w1, mid, false);
        emit_motion(arm, t0 + e0 + w1 + dwell,
                    t0 + std::min(e0 + w1 + dwell + w2, kEventCap), up, false);
        break;
      }
      case Action::release: {
        const int ring = ring_of(s.ring, k);
        // Open to a varied level, pausing at a part-way hesitation first when
        // the envelope leaves room for the finishing ramp.
        const double open_to = uni(kOpenLo, g_.jaw_open);
        const double hes = uni(kHesitateLo, kHesitateHi);
        // Often re-secure the grip with a small squeeze before opening; like
        // the pre-grasp widening it never crosses the threshold.
        double lead = kJawLead;
        if (uni(0.0, 1.0) < 0.6 && arm_jaw_[arm] > kClosedLo - 0.04) {
          const double to = arm_jaw_[arm] - uni(0.04, 0.06);
          const double wp = jaw_width(arm_jaw_[arm] - to);
          push_jaw(arm, t0 + kPreLead, wp, to);
          lead = kPreLead + wp + 0.03;
        }
        const double w2 = jaw_width(open_to - hes);
        double w1 = jaw_width(hes - arm_jaw_[arm]);
        double s1 = uni(lead, std::max(lead, kReleaseLeadHi));
        const double s2lo = s1 + w1 + 0.04;
        JawRamp first{};
        if (s2lo + w2 < kEventCap) {
          first = push_jaw(arm, t0 + s1, w1, hes);
          push_jaw(arm, t0 + uni(s2lo, kEventCap - w2), w2, open_to);
        } else {
          w1 = jaw_width(open_to - arm_jaw_[arm]);
          s1 = std::max(lead, std::min(s1, kEventCap - w1));
          first = push_jaw(arm, t0 + s1, w1, open_to);
        }
        if (carrier_[ring] == arm) {
          // The ring settles the moment the jaw passes the threshold: onto
          // the seat of the peg underneath, or straight down if there is none.
          Vec3 rest = {arm_pos_[arm][0], arm_pos_[arm][1], g_.ring_seat_z};
          for (size_t p = 0; p < sc_.initial_scene.pegs.size(); ++p) {
            if (dist_xy(arm_pos_[arm], sc_.initial_scene.pegs[p].pos) < g_.ring_radius) {
              rest = {sc_.initial_scene.pegs[p].pos[0], sc_.initial_scene.pegs[p].pos[1],
                      g_.ring_seat_z + g_.stack_dz * seat_count_[p]};
              ++seat_count_[p];
              seated_on_[ring] = static_cast<int>(p);
              break;
            }
          }
          events_.push_back({jaw_crossing(first), ring, -1, rest});
          carrier_[ring] = -1;
          ring_pos_[ring] = rest;
        }
        // Clear out of the workspace: sideways after a handover, else up and
        // slightly aside. The sideways component keeps the retreat visible in
        // y, where the staged extract pulls do not inflate the peak threshold.
        Vec3 park;
        if (dist3(arm_pos_[arm], g_.handover) < 1e-9) {
          park = g_.handover;
          park[1] += arm == 0 ? g_.park_dy : -g_.park_dy;
        } else {
          park = arm_pos_[arm];
          park[1] += arm == 0 ? kRetreatDrift : -kRetreatDrift;
          park[2] += kRetreatUp;
        }
        emit_motion(arm, t0 + uni(kRetreatStartLo, kRetreatStartHi), t1, park, false);
        break;
      }
    }
    annotations_.push_back({t0, t1, s.action, s.arm, s.ring});
  }

  ExecutionTrace sample(double total, double rate) const {
    ExecutionTrace tr;
    tr.sample_rate = rate;
    tr.meta["scenario"] = sc_.name;
    tr.meta["seed"] = std::to_string(sc_.rng_seed);

    const int n = static_cast<int>(std::ceil(total * rate - 1e-9)) + 1;
    std::array<size_t, 2> prim_at = {0, 0};
    std::array<size_t, 2> jaw_at = {0, 0};
    size_t event_at = 0;

    std::vector<Vec3> ring_static;
    std::vector<int> ring_carrier;
    for (const RingState& r : sc_.initial_scene.rings) {
      ring_static.push_back(r.pos);
      ring_carrier.push_back(-1);
    }

    tr.frames.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
      const double t = i / rate;
      Frame f;
      f.t = t;
      f.scene = sc_.initial_scene;

      for (int a = 0; a < 2; ++a) {
        // Invariant: prims[prim_at] is the latest motion with t0 <= t, if any.
        // A finished motion holds its endpoint bit-exactly, so parked arms are
        // byte-stable and an attached ring sits exactly where it was left.
        Vec3 pos = {0.0, a == 0 ? g_.home_y : -g_.home_y, g_.home_z};
        double roll = 0.0;
        const auto& prims = prims_[a];
        while (prim_at[a] + 1 < prims.size() && t >= prims[prim_at[a] + 1].t0) ++prim_at[a];
        if (!prims.empty() && t >= prims[prim_at[a]].t0) {
          const Prim& p = prims[prim_at[a]];
          if (t >= p.t1) {
            pos = p.to;
            roll = p.roll1;
          } else {
            const double s = blend_s(p.blend, t - p.t0);
            for (int d = 0; d < 3; ++d) pos[d] = p.from[d] + (p.to[d] - p.from[d]) * s;
            roll = p.roll1;
            if (t < p.rt0) {
              roll = p.roll0;
            } else if (t < p.rt1) {
              roll = p.roll0 + (p.roll1 - p.roll0) * mj((t - p.rt0) / (p.rt1 - p.rt0));
            }
          }
        }

        double jaw = g_.jaw_open;
        const auto& jaws = jaws_[a];
        while (jaw_at[a] + 1 < jaws.size() && t >= jaws[jaw_at[a] + 1].t0) ++jaw_at[a];
        if (!jaws.empty() && t >= jaws[jaw_at[a]].t0) {
          const JawRamp& r = jaws[jaw_at[a]];
          if (t >= r.t1) {
            jaw = r.to;
          } else {
            jaw = r.from + (r.to - r.from) * mj((t - r.t0) / (r.t1 - r.t0));
          }
        }

        f.arms[a].pos = pos;
        f.arms[a].jaw = jaw;
        f.arms[a].quat = {0.0, 0.0, std::sin(roll / 2.0), std::cos(roll / 2.0)};
      }

      while (event_at < events_.size() && events_[event_at].t <= t + 1e-12) {
        const RingEvent& e = events_[event_at];
        ring_carrier[e.ring] = e.carrier;
        if (e.carrier < 0) ring_static[e.ring] = e.rest;
        ++event_at;
      }
      for (size_t r = 0; r < ring_static.size(); ++r) {
        f.scene.rings[r].pos =
            ring_carrier[r] >= 0 ? f.arms[ring_carrier[r]].pos : ring_static[r];
      }

      tr.frames.push_back(std::move(f));
    }

    tr.annotations = annotations_;
    validate_trace(tr);
    return tr;
  }

  const Scenario& sc_;
  const Timing& tm_;
  const Geometry& g_;
  std::mt19937_64 rng_;

  std::array<std::vector<Prim>, 2> prims_;
  std::array<std::vector<JawRamp>, 2> jaws_;
  std::vector<RingEvent> events_;
  std::vector<Annotation> annotations_;

  std::array<Vec3, 2> arm_pos_;
  std::array<double, 2> arm_jaw_ = {0.0, 0.0};
  std::array<double, 2> arm_roll_ = {0.0, 0.0};
  std::array<int, 2> move_count_ = {0, 0};
  std::map<Color, int> ring_index_;
  std::map<Color, int> peg_index_;
  std::vector<Vec3> ring_pos_;
  std::vector<int> carrier_;
  std::vector<int> seated_on_;
  std::vector<int> seat_count_;
};

Vec3 seat_of(const Geometry& g, double x, double y) { return {x, y, g.ring_seat_z}; }

void leg_same(std::vector<ScriptStep>& s, Arm a, Color ring, Color to_peg,
              double drop = 0.0) {
  s.push_back({Action::move_ring, a, ring, ScriptStep::Target::ring, ring, -1, 0.0});
  s.push_back({Action::grasp, a, ring, ScriptStep::Target::none, ring, -1, 0.0});
  s.push_back({Action::extract, a, ring, ScriptStep::Target::none, ring, -1, 0.0});
  s.push_back({Action::move_peg, a, ring, ScriptStep::Target::peg, to_peg, -1, drop});
  s.push_back({Action::release, a, ring, ScriptStep::Target::none, ring, -1, 0.0});
}

void leg_base(std::vector<ScriptStep>& s, Arm a, Color ring, Color to_peg, int group = -1) {
  s.push_back({Action::move_ring, a, ring, ScriptStep::Target::ring, ring, group, 0.0});
  s.push_back({Action::grasp, a, ring, ScriptStep::Target::none, ring, group, 0.0});
  s.push_back({Action::move_peg, a, ring, ScriptStep::Target::peg, to_peg, group, 0.0});
  s.push_back({Action::release, a, ring, ScriptStep::Target::none, ring, group, 0.0});
}

void leg_transfer(std::vector<ScriptStep>& s, Arm holder, Arm receiver, Color ring,
                  Color to_peg, bool with_extract, int& next_group) {
  s.push_back({Action::move_ring, holder, ring, ScriptStep::Target::ring, ring, -1, 0.0});
  s.push_back({Action::grasp, holder, ring, ScriptStep::Target::none, ring, -1, 0.0});
  if (with_extract) {
    s.push_back({Action::extract, holder, ring, ScriptStep::Target::none, ring, -1, 0.0});
  }
  const int grp = next_group++;
  s.push_back({Action::move_center, holder, ring, ScriptStep::Target::center, ring, grp, 0.0});
  s.push_back({Action::move_center, receiver, ring, ScriptStep::Target::center, ring, grp, 0.0});
  s.push_back({Action::grasp, receiver, ring, ScriptStep::Target::none, ring, -1, 0.0});
  s.push_back({Action::release, holder, ring, ScriptStep::Target::none, ring, -1, 0.0});
  s.push_back({Action::move_peg, receiver, ring, ScriptStep::Target::peg, to_peg, -1, 0.0});
  s.push_back({Action::release, receiver, ring, ScriptStep::Target::none, ring, -1, 0.0});
}

}  // namespace

Scenario make_scenario(const std::string& name, std::uint64_t seed, const Geometry& g) {
  Scenario sc;
  sc.name = name;
  sc.rng_seed = seed;

  SceneState& scene = sc.initial_scene;
  scene.base_center = g.base_center;
  scene.ring_radius = g.ring_radius;
  scene.pegs = {
      {Color::red, {-g.peg_dx, g.peg_dy, g.peg_tip_z}},
      {Color::green, {0.0, g.peg_dy, g.peg_tip_z}},
      {Color::blue, {g.peg_dx, g.peg_dy, g.peg_tip_z}},
      {Color::yellow, {-g.peg_dx, -g.peg_dy, g.peg_tip_z}},
      {Color::grey, {g.peg_dx, -g.peg_dy, g.peg_tip_z}},
  };

  int next_group = 0;
  if (name == "standard") {
    scene.rings = {
        {Color::blue, seat_of(g, -g.peg_dx, g.peg_dy)},     // on red peg
        {Color::yellow, seat_of(g, 0.0, g.peg_dy)},         // on green peg
        {Color::red, seat_of(g, -g.peg_dx, -g.peg_dy)},     // on yellow peg
        {Color::green, seat_of(g, g.peg_dx, -g.peg_dy)},    // on grey peg
        {Color::grey, seat_of(g, 0.02, -0.06)},             // loose on the base
    };
    leg_same(sc.script, Arm::psm1, Color::blue, Color::blue);
    leg_transfer(sc.script, Arm::psm2, Arm::psm1, Color::red, Color::red, true, next_group);
    leg_transfer(sc.script, Arm::psm1, Arm::psm2, Color::yellow, Color::yellow, true,
                 next_group);
    leg_transfer(sc.script, Arm::psm2, Arm::psm1, Color::green, Color::green, true,
                 next_group);
    leg_base(sc.script, Arm::psm2, Color::grey, Color::grey);
  } else if (name == "failure") {
    scene.rings = {
        {Color::red, seat_of(g, -g.peg_dx, -g.peg_dy)},  // on yellow peg
        {Color::blue, seat_of(g, 0.0, g.peg_dy)},        // on green peg
    };
    leg_transfer(sc.script, Arm::psm2, Arm::psm1, Color::red, Color::red, true, next_group);
    // The blue ring slips mid-carry; the leg finishes with an empty release,
    // then a short recovery leg picks it up from where it fell.
    leg_same(sc.script, Arm::psm1, Color::blue, Color::blue, 0.45);
    leg_base(sc.script, Arm::psm1, Color::blue, Color::blue);
  } else if (name == "occupied_pegs") {
    scene.rings = {
        {Color::grey, seat_of(g, -g.peg_dx, g.peg_dy)},  // squatting on the red peg
        {Color::red, seat_of(g, 0.02, -0.06)},
        {Color::blue, seat_of(g, -0.02, 0.03)},
    };
    // Clear the red peg first, then transfer the base ring onto it.
    leg_same(sc.script, Arm::psm1, Color::grey, Color::grey);
    leg_transfer(sc.script, Arm::psm2, Arm::psm1, Color::red, Color::red, false, next_group);
    leg_base(sc.script, Arm::psm1, Color::blue, Color::blue);
  } else if (name == "simultaneous") {
    scene.rings = {
        {Color::blue, seat_of(g, -0.03, 0.025)},
        {Color::green, seat_of(g, 0.04, 0.03)},
        {Color::grey, seat_of(g, 0.02, -0.06)},
    };
    // Both arms run a base leg in lockstep, then PSM1 finishes alone.
    std::vector<ScriptStep> a, b;
    leg_base(a, Arm::psm1, Color::blue, Color::blue);
    leg_base(b, Arm::psm2, Color::grey, Color::grey);
    for (size_t i = 0; i < a.size(); ++i) {
      const int grp = next_group++;
      a[i].group = grp;
      b[i].group = grp;
      sc.script.push_back(a[i]);
      sc.script.push_back(b[i]);
    }
    leg_base(sc.script, Arm::psm1, Color::green, Color::green);
  } else {
    throw std::invalid_argument("unknown scenario '" + name +
                                "' (expected standard, failure, occupied_pegs, simultaneous)");
  }
  return sc;
}

ExecutionTrace generate_trace(const Scenario& scenario, double sample_rate,
                              const Timing& timing, const Geometry& g) {
  if (!(sample_rate > 0.0)) {
    throw std::invalid_argument("generate_trace: sample_rate must be positive");
  }
  if (scenario.script.empty()) {
    throw std::invalid_argument("generate_trace: empty script");
  }
  Executor ex(scenario, timing, g);
  return ex.run(sample_rate);
}

}  // namespace ringseg
