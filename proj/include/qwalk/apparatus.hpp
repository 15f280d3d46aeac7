#pragma once

// Optical-implementation bookkeeping: the visibility-to-q calibration map,
// the misalignment model behind it, interferometer element counts and the
// per-step loss budget.

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "qwalk/coin.hpp"
#include "qwalk/density_state.hpp"
#include "qwalk/tolerances.hpp"

namespace qwalk {

enum class CalibrationKind { gaussian_overlap };

// Visibility versus beam-displacer misalignment angle. Gaussian mode
// overlap, pinned by two anchors: V = 1 at zero angle and V = floor at
// zero_visibility_angle, below which readings are reported as 0.
struct CalibrationModel {
  double zero_visibility_angle = 10.5;  // degrees
  CalibrationKind kind = CalibrationKind::gaussian_overlap;
  double floor = 0.005;

  void validate() const {
    if (!(zero_visibility_angle > 0.0)) {
      throw std::invalid_argument("zero_visibility_angle must be > 0");
    }
    if (!(floor > 0.0 && floor < 0.05)) {
      throw std::invalid_argument("visibility floor must lie in (0, 0.05)");
    }
  }
};

namespace detail {

// rho -> P rho P^dagger with P the diagonal phase e^{i phi} on one site.
inline void apply_position_phase(DensityState& rho, int position, double phi) {
  const Complex phase = std::polar(1.0, phi);
  const Eigen::Index r = rho.index_of(position, 0);
  rho.matrix().middleRows<2>(r) *= phase;
  rho.matrix().middleCols<2>(r) *= std::conj(phase);
}

}  // namespace detail

// Interference visibility of the two-displacer test interferometer as a
// function of per-step dephasing. Input |D> at mode 0, first a bare
// displacer pass with dephasing, then a relative phase on the upper arm, a
// half-wave plate at 22.5 degrees and the second displacer; the mode-0
// count is swept over the inserted phase and V = (pmax - pmin)/(pmax + pmin).
// Computed from the full density simulation rather than an assumed formula,
// so the calibration follows the coin and input state if they change.
inline double visibility_from_q(double q) {
  if (!(q >= 0.0 && q <= 1.0)) {
    throw std::invalid_argument("dephasing probability q must lie in [0, 1]");
  }
  const CoinState d_state = coin_state_from_name("D");
  DensityState rho = DensityState::point(0, d_state, -2, 2);
  rho = step_density(rho, identity_coin(), q);

  double pmax = 0.0;
  double pmin = 1.0;
  for (int k = 0; k < kPhaseSweepSamples; ++k) {
    const double phi =
        2.0 * M_PI * static_cast<double>(k) / static_cast<double>(kPhaseSweepSamples);
    DensityState probe = rho;
    detail::apply_position_phase(probe, 1, phi);
    probe = step_density(probe, hadamard_coin(), q);
    const Eigen::Index h = probe.index_of(0, 0);
    const Eigen::Index v = probe.index_of(0, 1);
    // projection onto |0, D>
    const double p = 0.5 * (probe.matrix()(h, h).real() + probe.matrix()(v, v).real() +
                            2.0 * probe.matrix()(h, v).real());
    pmax = std::max(pmax, p);
    pmin = std::min(pmin, p);
  }
  const double total = pmax + pmin;
  return total > 0.0 ? (pmax - pmin) / total : 0.0;
}

// Inverts visibility_from_q by bisection; the map is monotone decreasing
// on [0, 1] (asserted as a tested property).
inline double q_from_visibility(double visibility) {
  if (!(visibility >= 0.0 && visibility <= 1.0)) {
    throw std::invalid_argument("visibility must lie in [0, 1]");
  }
  double lo = 0.0;
  double hi = 1.0;
  double mid = 0.5;
  for (int iter = 0; iter < 200; ++iter) {
    mid = 0.5 * (lo + hi);
    const double v = visibility_from_q(mid);
    if (std::abs(v - visibility) < kVisibilityTol) return mid;
    if (v > visibility) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return mid;
}

// Gaussian mode-overlap visibility at a given misalignment angle. The
// width is fixed so that V(zero_visibility_angle) = floor; values at or
// below the floor read as 0.
inline double misalignment_to_visibility(double angle_degrees,
                                         const CalibrationModel& model) {
  model.validate();
  const double angle = std::abs(angle_degrees);  // overlap is symmetric in sign
  const double sigma =
      model.zero_visibility_angle / std::sqrt(2.0 * std::log(1.0 / model.floor));
  const double v = std::exp(-angle * angle / (2.0 * sigma * sigma));
  return v <= model.floor ? 0.0 : v;
}

// Optical element counts for an N-step walk: this interferometer scheme
// needs 2N elements versus (N^2 + N)/2 for a triangular mesh of beam
// splitters.
struct ElementCount {
  long long this_scheme = 0;
  long long triangular_scheme = 0;
};

inline ElementCount element_count(int n) {
  if (n < 1) throw std::invalid_argument("element count needs N >= 1");
  const long long N = n;
  return ElementCount{2 * N, (N * N + N) / 2};
}

// Probability a photon survives N steps at a fixed per-step loss.
inline double survival_probability(int n, double loss_per_step) {
  if (n < 0) throw std::invalid_argument("survival probability needs N >= 0");
  if (!(loss_per_step >= 0.0 && loss_per_step < 1.0)) {
    throw std::invalid_argument("loss_per_step must lie in [0, 1)");
  }
  return std::pow(1.0 - loss_per_step, n);
}

}  // namespace qwalk
