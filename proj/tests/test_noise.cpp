#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <nlohmann/json.hpp>
#include <vector>

#include "ringseg/noise.hpp"
#include "ringseg/synth.hpp"
#include "ringseg/trace.hpp"
#include "support.hpp"

using namespace ringseg;

namespace {

double mean_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m += x;
  return m / double(v.size());
}

double std_of(const std::vector<double>& v) {
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / double(v.size()));
}

// Average periodogram over independent realizations.
std::vector<double> averaged_spectrum(int n, double rate, double lambda, int reps) {
  std::vector<double> acc;
  for (int r = 0; r < reps; ++r) {
    NoiseConfig cfg;
    cfg.beta = 0.02;
    cfg.lambda = lambda;
    cfg.seed = 100 + std::uint64_t(r);
    const std::vector<double> p = testsup::power_spectrum(synthesize_noise(n, rate, cfg));
    if (acc.empty()) acc.assign(p.size(), 0.0);
    for (size_t i = 0; i < p.size(); ++i) acc[i] += p[i] / reps;
  }
  return acc;
}

double band_mean(const std::vector<double>& spec, int n, double rate, double f_lo, double f_hi) {
  double sum = 0.0;
  int count = 0;
  for (size_t k = 1; k < spec.size(); ++k) {
    const double f = double(k) * rate / n;
    if (f >= f_lo && f <= f_hi) {
      sum += spec[k];
      ++count;
    }
  }
  REQUIRE(count > 0);
  return sum / count;
}

}  // namespace

TEST_CASE("spectrum falls off with the configured exponent") {
  const int n = 4096;
  const double rate = 50.0;
  const std::vector<double> spec = averaged_spectrum(n, rate, 7.5, 20);

  // Log-log slope over the synthesized band, clear of both the low-frequency
  // cutoff and the numerically tiny tail.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (size_t k = 1; k < spec.size(); ++k) {
    const double f = double(k) * rate / n;
    if (f < 0.2 || f > 1.0) continue;
    const double lx = std::log(f), ly = std::log(spec[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++m;
  }
  REQUIRE(m > 30);
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  CHECK(slope == doctest::Approx(-7.5).epsilon(0.04));  // +-0.3
}

TEST_CASE("almost no power survives past the pass band") {
  const int n = 4096;
  const double rate = 50.0;
  const std::vector<double> spec = averaged_spectrum(n, rate, 7.5, 20);
  const double ref = band_mean(spec, n, rate, 0.9, 1.1);
  const double high = band_mean(spec, n, rate, 1.5, 2.5);
  CHECK(high < 0.05 * ref);
}

TEST_CASE("samples come out zero-mean at the requested deviation") {
  NoiseConfig cfg;
  cfg.beta = 0.037;
  cfg.seed = 5;
  const std::vector<double> x = synthesize_noise(2000, 50.0, cfg);
  CHECK(std::abs(mean_of(x)) < 1e-12);
  CHECK(std_of(x) == doctest::Approx(0.037).epsilon(1e-12));
}

TEST_CASE("synthesis is deterministic in the seed") {
  NoiseConfig cfg;
  cfg.seed = 9;
  const std::vector<double> a = synthesize_noise(512, 50.0, cfg);
  const std::vector<double> b = synthesize_noise(512, 50.0, cfg);
  CHECK(a == b);
  cfg.seed = 10;
  CHECK(a != synthesize_noise(512, 50.0, cfg));
}

TEST_CASE("bad noise parameters are rejected") {
  NoiseConfig cfg;
  CHECK_THROWS_AS(synthesize_noise(0, 50.0, cfg), std::invalid_argument);
  CHECK_THROWS_AS(synthesize_noise(100, -1.0, cfg), std::invalid_argument);
  cfg.beta = -0.1;
  CHECK_THROWS_AS(synthesize_noise(100, 50.0, cfg), std::invalid_argument);
  cfg.beta = 0.1;
  cfg.lambda = 0.0;
  CHECK_THROWS_AS(synthesize_noise(100, 50.0, cfg), std::invalid_argument);
  cfg.lambda = 7.5;
  cfg.low_cut = 30.0;  // past Nyquist
  CHECK_THROWS_AS(synthesize_noise(100, 50.0, cfg), std::invalid_argument);
}

TEST_CASE("vanishing beta leaves the trace effectively untouched") {
  const ExecutionTrace tr = generate_trace(make_scenario("simultaneous", 3));
  NoiseConfig cfg;
  cfg.beta = 1e-12;
  cfg.seed = 1;
  const ExecutionTrace out = augment_with_noise(tr, cfg);
  REQUIRE(out.frames.size() == tr.frames.size());
  double worst = 0.0;
  for (size_t i = 0; i < tr.frames.size(); ++i) {
    for (int a = 0; a < kNumArms; ++a) {
      for (int d = 0; d < 3; ++d) {
        worst = std::max(worst,
                         std::abs(out.frames[i].arms[a].pos[d] - tr.frames[i].arms[a].pos[d]));
      }
      worst = std::max(worst, std::abs(out.frames[i].arms[a].jaw - tr.frames[i].arms[a].jaw));
    }
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("augmentation preserves every non-kinematic byte") {
  const ExecutionTrace tr = generate_trace(make_scenario("standard", 4));
  NoiseConfig cfg;
  cfg.beta = 0.09;
  cfg.seed = 77;
  const ExecutionTrace out = augment_with_noise(tr, cfg);
  CHECK_NOTHROW(validate_trace(out));

  const nlohmann::json ja = trace_to_json(tr);
  const nlohmann::json jb = trace_to_json(out);
  CHECK(ja["annotations"] == jb["annotations"]);
  CHECK(ja["meta"] == jb["meta"]);
  CHECK(ja["sample_rate"] == jb["sample_rate"]);
  REQUIRE(out.frames.size() == tr.frames.size());
  for (size_t i = 0; i < tr.frames.size(); i += 97) {
    CHECK(out.frames[i].t == tr.frames[i].t);
    CHECK(ja["frames"][i]["scene"] == jb["frames"][i]["scene"]);
  }
  // But the kinematics did change.
  CHECK(ja["frames"][100]["arms"] != jb["frames"][100]["arms"]);
}

TEST_CASE("noise amplitude tracks each column's own peak") {
  const ExecutionTrace tr = generate_trace(make_scenario("standard", 4));
  NoiseConfig cfg;
  cfg.beta = 0.05;
  cfg.seed = 12;
  const ExecutionTrace out = augment_with_noise(tr, cfg);

  // Position columns get no clamping, so the injected part is exactly the
  // synthesized stream times the column peak.
  for (int a = 0; a < kNumArms; ++a) {
    for (int d = 0; d < 3; ++d) {
      std::vector<double> delta, orig;
      for (size_t i = 0; i < tr.frames.size(); ++i) {
        delta.push_back(out.frames[i].arms[a].pos[d] - tr.frames[i].arms[a].pos[d]);
        orig.push_back(std::abs(tr.frames[i].arms[a].pos[d]));
      }
      const double peak = *std::max_element(orig.begin(), orig.end());
      REQUIRE(peak > 0.0);
      CHECK(std_of(delta) == doctest::Approx(0.05 * kNoiseGain * peak).epsilon(1e-6));
    }
  }

  // The roll-only rotation leaves quaternion x and y identically zero, and
  // zero columns must stay zero rather than acquire scaled noise.
  for (size_t i = 0; i < out.frames.size(); i += 53) {
    CHECK(out.frames[i].arms[0].quat[0] == 0.0);
    CHECK(out.frames[i].arms[0].quat[1] == 0.0);
  }
}

TEST_CASE("columns receive independent streams") {
  const ExecutionTrace tr = generate_trace(make_scenario("simultaneous", 3));
  NoiseConfig cfg;
  cfg.beta = 0.05;
  cfg.seed = 12;
  const ExecutionTrace out = augment_with_noise(tr, cfg);
  std::vector<double> dx, dy;
  for (size_t i = 0; i < tr.frames.size(); ++i) {
    dx.push_back(out.frames[i].arms[0].pos[0] - tr.frames[i].arms[0].pos[0]);
    dy.push_back(out.frames[i].arms[0].pos[1] - tr.frames[i].arms[0].pos[1]);
  }
  // Identical streams would be perfectly correlated after peak scaling.
  double num = 0, na = 0, nb = 0;
  for (size_t i = 0; i < dx.size(); ++i) {
    num += dx[i] * dy[i];
    na += dx[i] * dx[i];
    nb += dy[i] * dy[i];
  }
  CHECK(std::abs(num / std::sqrt(na * nb)) < 0.9);
}

TEST_CASE("augmentation is deterministic") {
  const ExecutionTrace tr = generate_trace(make_scenario("failure", 2));
  NoiseConfig cfg;
  cfg.beta = 0.03;
  cfg.seed = 21;
  const std::string a = trace_to_json(augment_with_noise(tr, cfg)).dump();
  const std::string b = trace_to_json(augment_with_noise(tr, cfg)).dump();
  CHECK(a == b);
}
