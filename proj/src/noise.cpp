#include "ringseg/noise.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>

#include "ringseg/trace.hpp"

namespace ringseg {

namespace {

void check_config(const NoiseConfig& cfg, double rate) {
  if (!(cfg.beta >= 0.0)) throw std::invalid_argument("noise: beta must be >= 0");
  if (!(cfg.lambda > 0.0)) throw std::invalid_argument("noise: lambda must be > 0");
  if (!(cfg.low_cut > 0.0) || cfg.low_cut >= rate / 2.0) {
    throw std::invalid_argument("noise: low_cut must lie in (0, rate/2)");
  }
}

}  // namespace

std::vector<double> synthesize_noise(int n, double sample_rate, const NoiseConfig& cfg) {
  if (n <= 0) throw std::invalid_argument("noise: n must be positive");
  if (!(sample_rate > 0.0)) throw std::invalid_argument("noise: sample_rate must be positive");
  check_config(cfg, sample_rate);

  std::vector<double> x(static_cast<size_t>(n), 0.0);
  std::mt19937_64 rng(cfg.seed);

  // One cosine per DFT bin between low_cut and Nyquist, amplitude f^(-lambda/2),
  // phase uniform. The 53-bit shift keeps the phase stream identical across
  // library implementations, which pins down byte-level reproducibility.
  const int k_lo = std::max(1, static_cast<int>(std::ceil(cfg.low_cut * n / sample_rate - 1e-12)));
  const int k_hi = n / 2;
  for (int k = k_lo; k <= k_hi; ++k) {
    const double f = k * sample_rate / n;
    const double amp = std::pow(f, -cfg.lambda / 2.0);
    const double phase = (static_cast<double>(rng() >> 11) * 0x1.0p-53) * 2.0 * std::numbers::pi;
    const double step = 2.0 * std::numbers::pi * k / n;
    // Rotate (c, s) by `step` per sample instead of calling cos n times.
    double c = std::cos(phase), s = std::sin(phase);
    const double cd = std::cos(step), sd = std::sin(step);
    for (int i = 0; i < n; ++i) {
      x[static_cast<size_t>(i)] += amp * c;
      const double cn = c * cd - s * sd;
      s = c * sd + s * cd;
      c = cn;
    }
  }

  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean);
  var /= n;
  if (var > 0.0) {
    const double scale = cfg.beta / std::sqrt(var);
    for (double& v : x) v = (v - mean) * scale;
  } else {
    std::fill(x.begin(), x.end(), 0.0);
  }
  return x;
}

ExecutionTrace augment_with_noise(const ExecutionTrace& trace, const NoiseConfig& cfg) {
  validate_trace(trace);
  check_config(cfg, trace.sample_rate);

  Eigen::MatrixXd k = kinematic_matrix(trace);
  const int n = static_cast<int>(k.rows());
  for (int col = 0; col < k.cols(); ++col) {
    const double peak = k.col(col).cwiseAbs().maxCoeff();
    if (peak <= 0.0) continue;
    NoiseConfig per_col = cfg;
    per_col.seed = cfg.seed + static_cast<std::uint64_t>(col);
    const std::vector<double> noise = synthesize_noise(n, trace.sample_rate, per_col);
    for (int i = 0; i < n; ++i) k(i, col) += noise[static_cast<size_t>(i)] * kNoiseGain * peak;
  }

  ExecutionTrace out = trace;
  for (int i = 0; i < n; ++i) {
    for (int a = 0; a < kNumArms; ++a) {
      ArmState& arm = out.frames[static_cast<size_t>(i)].arms[static_cast<size_t>(a)];
      const int base = a * kFeaturesPerArm;
      for (int d = 0; d < 3; ++d) arm.pos[static_cast<size_t>(d)] = k(i, base + d);
      Quat q;
      for (int d = 0; d < 4; ++d) q[static_cast<size_t>(d)] = k(i, base + 3 + d);
      const double norm = std::sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3]);
      if (norm > 0.0) {
        for (double& v : q) v /= norm;
      } else {
        q = {0.0, 0.0, 0.0, 1.0};
      }
      arm.quat = q;
      arm.jaw = std::clamp(k(i, base + 7), 0.0, std::numbers::pi);
    }
  }
  return out;
}

}  // namespace ringseg
