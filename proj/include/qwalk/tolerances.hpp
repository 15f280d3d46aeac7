#pragma once

// Numerical tolerances and resolution constants used across the library.
// Keep every threshold here so tests and callers agree on one set of numbers.

namespace qwalk {

// Unitarity of coin operators and per-step norm/trace drift.
inline constexpr double kUnitarityTol = 1e-12;

// Allowed eigenvalue undershoot for density matrices (rounding in repeated
// channel applications).
inline constexpr double kPositivitySlack = 1e-10;

// Probability bookkeeping: sum rules, absorption accounting.
inline constexpr double kMassTol = 1e-10;

// How close to 1 a distribution's mass must be to count as normalized.
inline constexpr double kNormalizedMassTol = 1e-9;

// Normalization requirement on user-supplied coin amplitudes.
inline constexpr double kStateNormTol = 1e-9;

// Probabilities at or below this are treated as empty lattice sites.
inline constexpr double kProbabilityFloor = 1e-15;

// Measured CSV files carry 12 significant digits, so their mass check is looser.
inline constexpr double kCsvMassTol = 1e-6;

// Decoherence fit: coarse grid size and golden-section bracket width target.
inline constexpr int kFitGridPoints = 101;
inline constexpr double kFitQResolution = 1e-4;

// Visibility inversion: bisection stops once |V(q) - target| drops below this.
inline constexpr double kVisibilityTol = 1e-6;

// Phase samples per 2*pi sweep when measuring interference visibility.
inline constexpr int kPhaseSweepSamples = 720;

}  // namespace qwalk
