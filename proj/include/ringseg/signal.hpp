#pragma once

#include <Eigen/Dense>
#include <vector>

namespace ringseg {

// Divides each column by its maximum absolute value. All-zero columns pass
// through unchanged so downstream thresholds never divide by zero.
Eigen::MatrixXd normalize_features(const Eigen::MatrixXd& K);

// Zero-phase low-pass: 2nd-order Butterworth run forward and backward over
// each column (odd-reflection padding, steady-state initial conditions).
// DC gain is exactly 1, so constant columns survive bit-for-bit up to
// rounding. Requires cutoff_hz < sample_rate_hz / 2.
Eigen::MatrixXd lowpass(const Eigen::MatrixXd& K, double cutoff_hz,
                        double sample_rate_hz);

// Single-series variant of the same filter.
std::vector<double> lowpass_series(const std::vector<double>& x,
                                   double cutoff_hz, double sample_rate_hz);

// Savitzky-Golay second derivative: least-squares polynomial of the given
// order over a centered window, evaluated at the center, in units of x per
// second^2. Boundaries are mirror-padded by (window-1)/2 samples, so only
// interior points are exact on polynomial inputs. Throws std::invalid_argument
// when the series is shorter than the window or the window is malformed.
std::vector<double> sg_second_derivative(const std::vector<double>& x,
                                         int window, int polyorder, double dt);

// Indexes of strict local maxima: y[i] > its neighbors on both sides, with
// plateaus reported at their leftmost sample. Endpoints never qualify.
std::vector<int> find_peaks(const std::vector<double>& y);

}  // namespace ringseg
