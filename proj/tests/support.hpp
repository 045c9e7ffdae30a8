#pragma once

// Shared helpers for the unit-test binaries. Everything here is deliberately
// naive (independent of the library internals) so it can serve as an oracle.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "ringseg/types.hpp"

namespace testsup {

inline ringseg::SceneState basic_scene() {
  ringseg::SceneState s;
  s.base_center = {0.0, 0.0, 0.0};
  s.ring_radius = 0.01;
  s.pegs = {{ringseg::Color::red, {-0.08, 0.05, 0.009}},
            {ringseg::Color::yellow, {-0.08, -0.05, 0.009}}};
  s.rings = {{ringseg::Color::red, {-0.08, -0.05, 0.002}}};
  return s;
}

inline ringseg::Frame basic_frame(double t) {
  ringseg::Frame f;
  f.t = t;
  f.arms[0].pos = {0.0, 0.10, 0.04};
  f.arms[1].pos = {0.0, -0.10, 0.04};
  f.arms[0].jaw = 1.5707963267948966;
  f.arms[1].jaw = 1.5707963267948966;
  f.scene = basic_scene();
  return f;
}

inline ringseg::ExecutionTrace basic_trace(std::size_t n_frames, double rate = 50.0) {
  ringseg::ExecutionTrace t;
  t.sample_rate = rate;
  for (std::size_t i = 0; i < n_frames; ++i) t.frames.push_back(basic_frame(double(i) / rate));
  return t;
}

// Unique scratch directory, removed on destruction.
class TempDir {
 public:
  TempDir() {
    auto base = std::filesystem::temp_directory_path();
    std::mt19937_64 rng(std::random_device{}());
    for (int attempt = 0; attempt < 100; ++attempt) {
      auto p = base / ("ringseg_test_" + std::to_string(rng()));
      if (std::filesystem::create_directory(p)) {
        path_ = p;
        return;
      }
    }
    throw std::runtime_error("cannot create temp dir");
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

// ---------------------------------------------------------------------------
// Brute-force fluent oracle: a from-scratch transliteration of the seven rule
// bodies producing textual atoms. Shares no code with the library evaluator.

inline std::set<std::string> oracle_fluents(const ringseg::Frame& f) {
  const char* color_name[] = {"red", "green", "blue", "yellow", "grey"};
  const char* arm_name[] = {"psm1", "psm2"};
  const double pi_over_8 = 3.14159265358979323846 / 8.0;
  auto d3 = [](const ringseg::Vec3& a, const ringseg::Vec3& b) {
    double s = 0;
    for (int i = 0; i < 3; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
  };
  std::set<std::string> out;
  const double rr = f.scene.ring_radius;
  for (int a = 0; a < 2; ++a) {
    const auto& arm = f.arms[a];
    for (const auto& r : f.scene.rings) {
      if (d3(arm.pos, r.pos) < rr)
        out.insert(std::string("at(") + arm_name[a] + ",ring," + color_name[int(r.color)] + ")");
      if (d3(arm.pos, r.pos) < rr && arm.jaw < pi_over_8)
        out.insert(std::string("in_hand(") + arm_name[a] + ",ring," + color_name[int(r.color)] +
                   ")");
    }
    for (const auto& p : f.scene.pegs)
      if (d3(arm.pos, p.pos) < rr && p.pos[2] < arm.pos[2])
        out.insert(std::string("at(") + arm_name[a] + ",peg," + color_name[int(p.color)] + ")");
    if (arm.jaw < pi_over_8) out.insert(std::string("closed_gripper(") + arm_name[a] + ")");
    const double cx = arm.pos[0] - f.scene.base_center[0];
    const double cy = arm.pos[1] - f.scene.base_center[1];
    if (std::sqrt(cx * cx + cy * cy) < rr)
      out.insert(std::string("at(") + arm_name[a] + ",center)");
  }
  for (const auto& r : f.scene.rings)
    for (const auto& p : f.scene.pegs)
      if (d3(r.pos, p.pos) < rr && r.pos[2] < p.pos[2])
        out.insert(std::string("on(ring,") + color_name[int(r.color)] + ",peg," +
                   color_name[int(p.color)] + ")");
  auto reach = [&](const ringseg::Vec3& pos, const std::string& obj, int color) {
    const double d1 = std::abs(pos[1] - f.arms[0].pos[1]);
    const double d2 = std::abs(pos[1] - f.arms[1].pos[1]);
    const int winner = d1 <= d2 ? 0 : 1;
    out.insert(std::string("reachable(") + arm_name[winner] + "," + obj + "," +
               color_name[color] + ")");
  };
  for (const auto& r : f.scene.rings) reach(r.pos, "ring", int(r.color));
  for (const auto& p : f.scene.pegs) reach(p.pos, "peg", int(p.color));
  return out;
}

// ---------------------------------------------------------------------------
// Hann-windowed periodogram via a textbook radix-2 FFT. Returns n/2 + 1 power
// values; bin k sits at frequency k * rate / n. Requires power-of-two n.

inline std::vector<double> power_spectrum(const std::vector<double>& x) {
  const std::size_t n = x.size();
  if (n == 0 || (n & (n - 1)) != 0) throw std::invalid_argument("power_spectrum: n must be 2^k");
  const double pi = 3.14159265358979323846;

  std::vector<std::complex<double>> a(n);
  double win_energy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = 0.5 * (1.0 - std::cos(2.0 * pi * double(i) / double(n - 1)));
    a[i] = x[i] * w;
    win_energy += w * w;
  }

  // Bit-reversal permutation, then butterflies.
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * pi / double(len);
    const std::complex<double> wl(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }

  std::vector<double> p(n / 2 + 1);
  for (std::size_t k = 0; k < p.size(); ++k) p[k] = std::norm(a[k]) / win_energy;
  return p;
}

// Randomized frame whose object distances cluster around the fluent radii so
// both rule polarities are exercised.
inline ringseg::Frame random_frame(std::mt19937_64& rng) {
  using namespace ringseg;
  std::uniform_real_distribution<double> box(-0.03, 0.03);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Frame f;
  f.t = 0.0;
  f.scene.ring_radius = 0.004 + 0.026 * unit(rng);
  f.scene.base_center = {box(rng), box(rng), 0.0};
  std::array<int, 5> colors = {0, 1, 2, 3, 4};
  std::shuffle(colors.begin(), colors.end(), rng);
  const int n_rings = int(rng() % 4);  // 0..3
  const int n_pegs = int(rng() % 4);
  f.scene.rings.clear();
  f.scene.pegs.clear();
  for (int i = 0; i < n_rings; ++i)
    f.scene.rings.push_back({Color(colors[i]), {box(rng), box(rng), box(rng)}});
  std::shuffle(colors.begin(), colors.end(), rng);
  for (int i = 0; i < n_pegs; ++i)
    f.scene.pegs.push_back({Color(colors[i]), {box(rng), box(rng), box(rng)}});
  for (int a = 0; a < 2; ++a) {
    f.arms[a].pos = {box(rng), box(rng), box(rng)};
    f.arms[a].jaw = 3.14159265358979323846 * unit(rng);
    f.arms[a].quat = {0, 0, 0, 1};
  }
  return f;
}

}  // namespace testsup
