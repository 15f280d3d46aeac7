#pragma once

// Coin (polarization) degree of freedom: two-level states in the (H, V)
// basis and the 2x2 unitaries that act on them each step.

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "qwalk/tolerances.hpp"

namespace qwalk {

using Complex = std::complex<double>;

// Amplitude pair in the (H, V) basis. Standalone walker states are
// normalized; components of a lattice state may carry less than unit mass.
struct CoinState {
  Complex h{0.0, 0.0};
  Complex v{0.0, 0.0};

  double norm2() const { return std::norm(h) + std::norm(v); }

  bool operator==(const CoinState&) const = default;
};

// Named polarization states. "L" is the circular state that makes the
// Hadamard walk symmetric.
inline CoinState coin_state_from_name(const std::string& name) {
  const double r = 1.0 / std::numbers::sqrt2;
  if (name == "H") return {Complex{1, 0}, Complex{0, 0}};
  if (name == "V") return {Complex{0, 0}, Complex{1, 0}};
  if (name == "D") return {Complex{r, 0}, Complex{r, 0}};
  if (name == "A") return {Complex{r, 0}, Complex{-r, 0}};
  if (name == "L") return {Complex{r, 0}, Complex{0, r}};
  if (name == "R") return {Complex{r, 0}, Complex{0, -r}};
  throw std::invalid_argument("unknown coin state name '" + name + "'");
}

// 2x2 unitary on the coin space. Construction rejects matrices whose
// U U^dagger deviates from the identity by more than kUnitarityTol.
class CoinOperator {
 public:
  explicit CoinOperator(const Eigen::Matrix2cd& entries) : entries_(entries) {
    const Eigen::Matrix2cd gram = entries_ * entries_.adjoint();
    const double err = (gram - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff();
    if (!(err <= kUnitarityTol)) {
      throw std::invalid_argument("coin operator is not unitary (deviation " +
                                  std::to_string(err) + ")");
    }
  }

  const Eigen::Matrix2cd& matrix() const { return entries_; }

  CoinState apply(const CoinState& s) const {
    return {entries_(0, 0) * s.h + entries_(0, 1) * s.v,
            entries_(1, 0) * s.h + entries_(1, 1) * s.v};
  }

 private:
  Eigen::Matrix2cd entries_;
};

// Unbiased coin: |H> -> |D>, |V> -> |A>.
inline CoinOperator hadamard_coin() {
  const double r = 1.0 / std::numbers::sqrt2;
  Eigen::Matrix2cd m;
  m << r, r, r, -r;
  return CoinOperator(m);
}

inline CoinOperator identity_coin() {
  return CoinOperator(Eigen::Matrix2cd::Identity());
}

enum class WaveplateKind { half, quarter };

// Jones matrices for wave plates at a given fast-axis angle (degrees).
// A half-wave plate at 22.5 degrees realizes the Hadamard coin. The
// quarter-wave convention carries a fixed e^{-i pi/4} global phase.
inline CoinOperator waveplate_unitary(WaveplateKind kind, double angle_degrees) {
  if (!std::isfinite(angle_degrees)) {
    throw std::invalid_argument("waveplate angle must be finite");
  }
  const double theta = angle_degrees * std::numbers::pi / 180.0;
  Eigen::Matrix2cd m;
  switch (kind) {
    case WaveplateKind::half: {
      const double c2 = std::cos(2.0 * theta);
      const double s2 = std::sin(2.0 * theta);
      m << c2, s2, s2, -c2;
      break;
    }
    case WaveplateKind::quarter: {
      const double c = std::cos(theta);
      const double s = std::sin(theta);
      const Complex phase = std::polar(1.0, -std::numbers::pi / 4.0);
      const Complex i{0.0, 1.0};
      const Complex off = (1.0 - i) * s * c;
      m << phase * (c * c + i * s * s), phase * off,
           phase * off, phase * (s * s + i * c * c);
      break;
    }
    default:
      throw std::invalid_argument("unknown waveplate kind");
  }
  return CoinOperator(m);
}

}  // namespace qwalk
