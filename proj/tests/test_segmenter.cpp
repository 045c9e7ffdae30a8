#include "ringseg/segmenter.hpp"

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "ringseg/fluents.hpp"
#include "ringseg/trace.hpp"
#include "support.hpp"

using namespace ringseg;

namespace {

double minjerk(double u) { return ((6.0 * u - 15.0) * u + 10.0) * u * u * u; }

// Idle, one minimum-jerk move on PSM1 x, idle again.
ExecutionTrace one_move_trace(double idle_s = 1.0, double move_s = 0.9,
                              double tail_s = 1.0, double dist = 0.05) {
  const double rate = 50.0;
  ExecutionTrace tr;
  tr.sample_rate = rate;
  const int n = static_cast<int>(std::round((idle_s + move_s + tail_s) * rate)) + 1;
  for (int i = 0; i < n; ++i) {
    const double t = i / rate;
    Frame f = testsup::basic_frame(t);
    const double u = std::clamp((t - idle_s) / move_s, 0.0, 1.0);
    f.arms[0].pos[0] = dist * minjerk(u);
    tr.frames.push_back(f);
  }
  return tr;
}

Changepoint cp(const ExecutionTrace& tr, int idx) {
  return {idx, tr.frames[static_cast<size_t>(idx)].t, 0};
}

// Arm parked on the red ring: flips at() and reachable() relative to home.
void park_on_ring(Frame& f) { f.arms[0].pos = f.scene.rings[0].pos; }

}  // namespace

TEST_CASE("constant trace yields no changepoints") {
  const ExecutionTrace tr = testsup::basic_trace(100);
  CHECK(detect_changepoints(tr, {}).empty());
}

TEST_CASE("single minimum-jerk move yields exactly two changepoints") {
  const double idle = 1.0, dur = 0.9;
  const ExecutionTrace tr = one_move_trace(idle, dur);
  const std::vector<Changepoint> cps = detect_changepoints(tr, {});

  REQUIRE(cps.size() == 2);
  CHECK(cps[0].index < cps[1].index);
  CHECK(cps[0].source_feature == 0);
  CHECK(cps[1].source_feature == 0);

  // Move boundaries, required tolerance.
  CHECK(std::fabs(cps[0].t - idle) <= 0.2);
  CHECK(std::fabs(cps[1].t - (idle + dur)) <= 0.2);

  // Analytic oracle: minimum-jerk |accel| peaks where the jerk
  // 60 - 360u + 360u^2 vanishes, at u = 1/2 -+ sqrt(3)/6.
  const double u_peak = 0.5 - std::sqrt(3.0) / 6.0;
  CHECK(std::fabs(cps[0].t - (idle + u_peak * dur)) <= 0.15);
  CHECK(std::fabs(cps[1].t - (idle + (1.0 - u_peak) * dur)) <= 0.15);
}

TEST_CASE("two features peaking at the same index merge into one changepoint") {
  const double idle = 1.0, dur = 0.9, rate = 50.0;
  ExecutionTrace tr;
  tr.sample_rate = rate;
  const int n = static_cast<int>(std::round(2.9 * rate)) + 1;
  for (int i = 0; i < n; ++i) {
    const double t = i / rate;
    Frame f = testsup::basic_frame(t);
    const double u = std::clamp((t - idle) / dur, 0.0, 1.0);
    f.arms[0].pos[0] = 0.05 * minjerk(u);
    f.arms[0].pos[1] = 0.10 + 0.05 * minjerk(u);
    tr.frames.push_back(f);
  }
  const std::vector<Changepoint> cps = detect_changepoints(tr, {});
  REQUIRE(cps.size() == 2);
  // Duplicate indexes collapse, keeping the lowest column.
  CHECK(cps[0].source_feature == 0);
  CHECK(cps[1].source_feature == 0);
}

TEST_CASE("filtering removes candidates closer than min_gap") {
  ExecutionTrace tr = testsup::basic_trace(250);
  park_on_ring(tr.frames[120]);
  park_on_ring(tr.frames[160]);

  // 0.4 s apart: second removed even though the fluents differ.
  auto kept = filter_changepoints(tr, {cp(tr, 100), cp(tr, 120)}, {});
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].index == 100);

  // 1.2 s apart with differing fluents: both stay.
  kept = filter_changepoints(tr, {cp(tr, 100), cp(tr, 160)}, {});
  CHECK(kept.size() == 2);
}

TEST_CASE("gap test is strict: exactly min_gap apart survives") {
  ExecutionTrace tr = testsup::basic_trace(250);
  park_on_ring(tr.frames[150]);
  const auto kept = filter_changepoints(tr, {cp(tr, 100), cp(tr, 150)}, {});
  CHECK(kept.size() == 2);
}

TEST_CASE("filtering removes candidates with identical fluent sets") {
  const ExecutionTrace tr = testsup::basic_trace(250);
  // Both frames show the arms at home: same fluents, 1.2 s apart.
  const auto kept = filter_changepoints(tr, {cp(tr, 100), cp(tr, 160)}, {});
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].index == 100);
}

TEST_CASE("first candidate is gap-tested against the trace start") {
  const ExecutionTrace tr = testsup::basic_trace(250);
  CHECK(filter_changepoints(tr, {cp(tr, 30)}, {}).empty());
  CHECK(filter_changepoints(tr, {cp(tr, 60)}, {}).size() == 1);
}

TEST_CASE("empty candidate list passes through") {
  const ExecutionTrace tr = testsup::basic_trace(64);
  CHECK(filter_changepoints(tr, {}, {}).empty());
}

TEST_CASE("literal filter tracks removed candidates, default tracks kept ones") {
  ExecutionTrace tr = testsup::basic_trace(250);
  park_on_ring(tr.frames[125]);
  park_on_ring(tr.frames[160]);
  const std::vector<Changepoint> cand = {cp(tr, 100), cp(tr, 125), cp(tr, 160)};

  SegmenterConfig cfg;
  auto kept = filter_changepoints(tr, cand, cfg);
  // t=2.5 falls within the gap of t=2.0; t=3.2 is then compared against the
  // kept t=2.0 candidate and survives on both counts.
  REQUIRE(kept.size() == 2);
  CHECK(kept[0].index == 100);
  CHECK(kept[1].index == 160);

  cfg.literal_filter = true;
  kept = filter_changepoints(tr, cand, cfg);
  // The removed t=2.5 candidate still advances the comparison point, so
  // t=3.2 now fails the gap test against it.
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].index == 100);
}

TEST_CASE("literal filter keeps survivors at least min_gap apart") {
  // Random candidate sets: in literal mode the comparison time always moves
  // to the previous candidate, so survivor spacing is bounded below.
  ExecutionTrace tr = testsup::basic_trace(500);
  std::mt19937_64 rng(7);
  for (int round = 0; round < 50; ++round) {
    std::vector<Changepoint> cand;
    int idx = 10;
    while (idx < 490) {
      if (rng() % 3 == 0) park_on_ring(tr.frames[idx]);
      cand.push_back(cp(tr, idx));
      idx += 5 + static_cast<int>(rng() % 80);
    }
    SegmenterConfig cfg;
    cfg.literal_filter = true;
    const auto kept = filter_changepoints(tr, cand, cfg);
    for (size_t i = 1; i < kept.size(); ++i) {
      CHECK(kept[i].t - kept[i - 1].t >= cfg.min_gap);
    }
    // Reset parked frames for the next round.
    for (int k = 10; k < 490; ++k) tr.frames[k] = testsup::basic_frame(tr.frames[k].t);
  }
}

TEST_CASE("detection is invariant to positive scaling of a column") {
  ExecutionTrace tr = one_move_trace();
  const std::vector<Changepoint> before = detect_changepoints(tr, {});
  for (Frame& f : tr.frames) f.arms[0].pos[0] *= 4.0;
  const std::vector<Changepoint> after = detect_changepoints(tr, {});
  REQUIRE(before.size() == after.size());
  for (size_t i = 0; i < before.size(); ++i) {
    CHECK(before[i].index == after[i].index);
    CHECK(before[i].source_feature == after[i].source_feature);
  }
}

TEST_CASE("segment tiles the trace with implicit boundaries") {
  const ExecutionTrace tr = one_move_trace();
  const std::vector<Segment> segs = segment(tr, {});
  REQUIRE(!segs.empty());
  CHECK(segs.front().start.index == 0);
  CHECK(segs.back().end.index == static_cast<int>(tr.frames.size()) - 1);
  for (size_t i = 1; i < segs.size(); ++i) {
    CHECK(segs[i].start.index == segs[i - 1].end.index);
  }
  for (const Segment& s : segs) CHECK(s.start.t < s.end.t);
}

TEST_CASE("trace without surviving changepoints becomes one segment") {
  const ExecutionTrace tr = testsup::basic_trace(100);
  const std::vector<Segment> segs = segment(tr, {});
  REQUIRE(segs.size() == 1);
  CHECK(segs[0].start.index == 0);
  CHECK(segs[0].end.index == 99);
}

TEST_CASE("segmentation is deterministic") {
  const ExecutionTrace tr = one_move_trace();
  const auto a = segment(tr, {});
  const auto b = segment(tr, {});
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].start.index == b[i].start.index);
    CHECK(a[i].end.index == b[i].end.index);
    CHECK(a[i].start.t == b[i].start.t);
  }
}

TEST_CASE("too-short traces and bad configs are rejected") {
  CHECK_THROWS_AS(detect_changepoints(testsup::basic_trace(41), {}), std::invalid_argument);

  const ExecutionTrace tr = testsup::basic_trace(64);
  SegmenterConfig cfg;
  cfg.alpha = 0.0;
  CHECK_THROWS_AS(detect_changepoints(tr, cfg), std::invalid_argument);
  cfg = {};
  cfg.alpha = 1.0;
  CHECK_THROWS_AS(detect_changepoints(tr, cfg), std::invalid_argument);
  cfg = {};
  cfg.sg_window = 20;
  CHECK_THROWS_AS(detect_changepoints(tr, cfg), std::invalid_argument);
  cfg = {};
  cfg.lowpass_cutoff = 25.0;
  CHECK_THROWS_AS(detect_changepoints(tr, cfg), std::invalid_argument);
  cfg = {};
  cfg.min_gap = 0.0;
  CHECK_THROWS_AS(detect_changepoints(tr, cfg), std::invalid_argument);
}

TEST_CASE("unsorted candidates are rejected") {
  const ExecutionTrace tr = testsup::basic_trace(250);
  CHECK_THROWS_AS(filter_changepoints(tr, {cp(tr, 120), cp(tr, 100)}, {}),
                  std::invalid_argument);
}

TEST_CASE("segments round-trip through the file format") {
  const ExecutionTrace tr = one_move_trace();
  const std::vector<Segment> segs = segment(tr, {});
  testsup::TempDir dir;
  const auto path = dir.path() / "segments.json";
  save_segments(segs, {}, path);

  const std::vector<Segment> back = load_segments(path);
  REQUIRE(back.size() == segs.size());
  for (size_t i = 0; i < segs.size(); ++i) {
    CHECK(back[i].start.index == segs[i].start.index);
    CHECK(back[i].end.index == segs[i].end.index);
    CHECK(back[i].start.t == segs[i].start.t);
    CHECK(back[i].end.t == segs[i].end.t);
  }

  // The file carries the config echo alongside the segments.
  const nlohmann::json j = read_json_file(path);
  CHECK(j.contains("config"));
  CHECK(j["config"]["alpha"] == 0.20);

  // A bare array is accepted too.
  const auto bare = dir.path() / "bare.json";
  write_json_atomic(j["segments"], bare);
  CHECK(load_segments(bare).size() == segs.size());

  CHECK_THROWS(load_segments(dir.path() / "missing.json"));
  write_json_atomic(nlohmann::json{{"foo", 1}}, dir.path() / "bad.json");
  CHECK_THROWS_AS(load_segments(dir.path() / "bad.json"), std::invalid_argument);
}

TEST_CASE("config json round-trips and rejects unknown keys") {
  SegmenterConfig cfg;
  cfg.alpha = 0.35;
  cfg.min_gap = 2.0;
  cfg.literal_filter = true;
  const nlohmann::json j = segmenter_config_to_json(cfg);
  const SegmenterConfig back = segmenter_config_from_json(j);
  CHECK(back.alpha == 0.35);
  CHECK(back.min_gap == 2.0);
  CHECK(back.literal_filter);
  CHECK(back.sg_window == 21);

  // Partial objects override only their keys.
  const SegmenterConfig partial = segmenter_config_from_json({{"alpha", 0.5}});
  CHECK(partial.alpha == 0.5);
  CHECK(partial.min_gap == 1.0);

  CHECK_THROWS_AS(segmenter_config_from_json({{"alhpa", 0.5}}), std::invalid_argument);
}
