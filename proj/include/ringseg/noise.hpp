#pragma once

#include <cstdint>
#include <vector>

#include "ringseg/types.hpp"

namespace ringseg {

struct NoiseConfig {
  double beta = 0.01;      // spectral scale; see kNoiseGain for realized amplitude
  double lambda = 7.5;     // spectral exponent: power falls off as f^-lambda
  std::uint64_t seed = 0;
  double low_cut = 0.1;    // Hz, lowest synthesized frequency
};

// Realized augmentation amplitude per unit beta: a column with peak magnitude
// p receives noise of standard deviation kNoiseGain * beta * p. The gain puts
// the top of the usual beta range (0.09) safely below the 0.02 excursion
// threshold the Boolean features use and below the 0.01 m contact radii the
// fluents test, so augmentation perturbs the signals without invalidating
// scene predicates the way a sensor glitch would not.
inline constexpr double kNoiseGain = 0.07;

// n samples of band-limited 1/f^lambda noise at the given rate, rescaled to
// zero mean and sample standard deviation beta. Deterministic in cfg.seed.
std::vector<double> synthesize_noise(int n, double sample_rate, const NoiseConfig& cfg);

// Per-column noise injection: column c of the kinematic matrix gets an
// independent stream (seed cfg.seed + c) scaled by kNoiseGain times that
// column's peak magnitude, so beta reads as a bounded fraction of each
// signal's own range. Quaternions are re-normalized and jaw angles clamped
// back to [0, pi]; columns that are identically zero stay untouched, and the
// scene objects and annotations pass through unchanged.
ExecutionTrace augment_with_noise(const ExecutionTrace& trace, const NoiseConfig& cfg);

}  // namespace ringseg
