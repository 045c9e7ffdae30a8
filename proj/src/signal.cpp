#include "ringseg/signal.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ringseg {

namespace {

struct Biquad {
  double b0, b1, b2;
  double a1, a2;  // a0 normalized to 1
};

Biquad butter2_lowpass(double cutoff_hz, double sample_rate_hz) {
  if (!(cutoff_hz > 0.0) || !(cutoff_hz < sample_rate_hz / 2.0)) {
    throw std::invalid_argument("lowpass: cutoff must lie in (0, sample_rate/2), got " +
                                std::to_string(cutoff_hz) + " Hz at " +
                                std::to_string(sample_rate_hz) + " Hz");
  }
  // Bilinear transform of the analog 2nd-order Butterworth prototype.
  const double k = std::tan(std::numbers::pi * cutoff_hz / sample_rate_hz);
  const double k2 = k * k;
  const double norm = 1.0 / (1.0 + std::numbers::sqrt2 * k + k2);
  Biquad f;
  f.b0 = k2 * norm;
  f.b1 = 2.0 * f.b0;
  f.b2 = f.b0;
  f.a1 = 2.0 * (k2 - 1.0) * norm;
  f.a2 = (1.0 - std::numbers::sqrt2 * k + k2) * norm;
  return f;
}

// Direct-form II transposed pass with explicit initial state.
void run_filter(const Biquad& f, std::vector<double>& x, double z1, double z2) {
  for (double& v : x) {
    const double y = f.b0 * v + z1;
    z1 = f.b1 * v - f.a1 * y + z2;
    z2 = f.b2 * v - f.a2 * y;
    v = y;
  }
}

// State that holds the filter at steady state for a unit constant input;
// scaled by the first sample before each pass to kill the startup transient.
void steady_state(const Biquad& f, double& z1, double& z2) {
  const double dc = (f.b0 + f.b1 + f.b2) / (1.0 + f.a1 + f.a2);
  z1 = f.b1 + f.b2 - (f.a1 + f.a2) * dc;
  z2 = f.b2 - f.a2 * dc;
}

std::vector<double> filtfilt(const Biquad& f, const std::vector<double>& x) {
  const int n = static_cast<int>(x.size());
  if (n == 0) return {};
  const int pad = std::min(9, n - 1);

  // Odd reflection about both endpoints.
  std::vector<double> ext;
  ext.reserve(x.size() + 2 * static_cast<size_t>(pad));
  for (int i = pad; i >= 1; --i) ext.push_back(2.0 * x[0] - x[i]);
  ext.insert(ext.end(), x.begin(), x.end());
  for (int i = 1; i <= pad; ++i) ext.push_back(2.0 * x[n - 1] - x[n - 1 - i]);

  double z1u, z2u;
  steady_state(f, z1u, z2u);

  run_filter(f, ext, z1u * ext.front(), z2u * ext.front());
  std::reverse(ext.begin(), ext.end());
  run_filter(f, ext, z1u * ext.front(), z2u * ext.front());
  std::reverse(ext.begin(), ext.end());

  return std::vector<double>(ext.begin() + pad, ext.begin() + pad + n);
}

}  // namespace

Eigen::MatrixXd normalize_features(const Eigen::MatrixXd& K) {
  Eigen::MatrixXd out = K;
  for (Eigen::Index c = 0; c < out.cols(); ++c) {
    const double m = out.col(c).cwiseAbs().maxCoeff();
    if (m > 0.0) out.col(c) /= m;
  }
  return out;
}

std::vector<double> lowpass_series(const std::vector<double>& x,
                                   double cutoff_hz, double sample_rate_hz) {
  return filtfilt(butter2_lowpass(cutoff_hz, sample_rate_hz), x);
}

Eigen::MatrixXd lowpass(const Eigen::MatrixXd& K, double cutoff_hz,
                        double sample_rate_hz) {
  const Biquad f = butter2_lowpass(cutoff_hz, sample_rate_hz);
  Eigen::MatrixXd out(K.rows(), K.cols());
  std::vector<double> col(static_cast<size_t>(K.rows()));
  for (Eigen::Index c = 0; c < K.cols(); ++c) {
    for (Eigen::Index r = 0; r < K.rows(); ++r) col[static_cast<size_t>(r)] = K(r, c);
    const std::vector<double> y = filtfilt(f, col);
    for (Eigen::Index r = 0; r < K.rows(); ++r) out(r, c) = y[static_cast<size_t>(r)];
  }
  return out;
}

std::vector<double> sg_second_derivative(const std::vector<double>& x,
                                         int window, int polyorder, double dt) {
  if (window < 3 || window % 2 == 0) {
    throw std::invalid_argument("sg_second_derivative: window must be odd and >= 3, got " +
                                std::to_string(window));
  }
  if (polyorder < 2 || polyorder >= window) {
    throw std::invalid_argument("sg_second_derivative: polyorder must be in [2, window), got " +
                                std::to_string(polyorder));
  }
  if (!(dt > 0.0)) {
    throw std::invalid_argument("sg_second_derivative: dt must be positive");
  }
  const int n = static_cast<int>(x.size());
  if (n < window) {
    throw std::invalid_argument("sg_second_derivative: series of " + std::to_string(n) +
                                " samples is shorter than window " + std::to_string(window));
  }

  const int h = window / 2;

  // Least-squares fit over sample offsets -h..h; row 2 of the pseudo-inverse
  // gives the quadratic coefficient, whose second derivative is 2 * that.
  Eigen::MatrixXd a(window, polyorder + 1);
  for (int i = 0; i < window; ++i) {
    double p = 1.0;
    for (int j = 0; j <= polyorder; ++j) {
      a(i, j) = p;
      p *= static_cast<double>(i - h);
    }
  }
  const Eigen::MatrixXd pinv = (a.transpose() * a).ldlt().solve(a.transpose());
  const Eigen::VectorXd coeff = 2.0 / (dt * dt) * pinv.row(2).transpose();

  // Mirror padding that excludes the edge sample itself; n >= window
  // guarantees the reflected indexes stay in range.
  std::vector<double> ext;
  ext.reserve(static_cast<size_t>(n + 2 * h));
  for (int i = h; i >= 1; --i) ext.push_back(x[static_cast<size_t>(i)]);
  ext.insert(ext.end(), x.begin(), x.end());
  for (int i = 1; i <= h; ++i) ext.push_back(x[static_cast<size_t>(n - 1 - i)]);

  std::vector<double> out(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < window; ++j) s += coeff(j) * ext[static_cast<size_t>(i + j)];
    out[static_cast<size_t>(i)] = s;
  }
  return out;
}

std::vector<int> find_peaks(const std::vector<double>& y) {
  std::vector<int> peaks;
  const int n = static_cast<int>(y.size());
  int i = 1;
  while (i < n - 1) {
    if (y[static_cast<size_t>(i)] > y[static_cast<size_t>(i - 1)]) {
      int j = i;
      while (j + 1 < n && y[static_cast<size_t>(j + 1)] == y[static_cast<size_t>(i)]) ++j;
      if (j + 1 < n && y[static_cast<size_t>(j + 1)] < y[static_cast<size_t>(i)]) {
        peaks.push_back(i);
      }
      i = j + 1;
    } else {
      ++i;
    }
  }
  return peaks;
}

}  // namespace ringseg
