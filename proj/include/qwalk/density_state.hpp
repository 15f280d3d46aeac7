#pragma once

// Mixed walker states: a Hermitian matrix over the composite
// (position x coin) basis, plus the channel primitives. Composite index
// of (position j, coin c) is 2*(j - min_pos) + c with c = 0 for H, 1 for V.

#include <span>
#include <stdexcept>
#include <utility>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "qwalk/coin.hpp"
#include "qwalk/distribution.hpp"
#include "qwalk/pure_state.hpp"
#include "qwalk/tolerances.hpp"

namespace qwalk {

class DensityState {
 public:
  DensityState(int min_pos, int max_pos)
      : min_pos_(min_pos), max_pos_(max_pos) {
    if (max_pos < min_pos) {
      throw std::invalid_argument("density state window is empty");
    }
    matrix_ = Eigen::MatrixXcd::Zero(dim(), dim());
  }

  static DensityState from_pure(const PureState& psi) {
    DensityState rho(psi.min_pos(), psi.max_pos());
    Eigen::VectorXcd v(rho.dim());
    for (int j = psi.min_pos(); j <= psi.max_pos(); ++j) {
      v(rho.index_of(j, 0)) = psi.at(j).h;
      v(rho.index_of(j, 1)) = psi.at(j).v;
    }
    rho.matrix_ = v * v.adjoint();
    return rho;
  }

  static DensityState point(int position, const CoinState& coin, int min_pos,
                            int max_pos) {
    return from_pure(PureState::point(position, coin, min_pos, max_pos));
  }

  int min_pos() const { return min_pos_; }
  int max_pos() const { return max_pos_; }
  int window_length() const { return max_pos_ - min_pos_ + 1; }
  Eigen::Index dim() const { return 2 * static_cast<Eigen::Index>(window_length()); }

  bool contains(int position) const {
    return position >= min_pos_ && position <= max_pos_;
  }

  Eigen::Index index_of(int position, int coin_component) const {
    if (!contains(position)) {
      throw std::logic_error("lattice position outside state window");
    }
    return 2 * static_cast<Eigen::Index>(position - min_pos_) + coin_component;
  }

  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  Eigen::MatrixXcd& matrix() { return matrix_; }

  double trace_real() const { return matrix_.trace().real(); }

  double hermiticity_error() const {
    return (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
  }

  // Smallest eigenvalue of the (numerically Hermitian) matrix; state
  // validity requires it to stay above -kPositivitySlack.
  double min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(matrix_,
                                                           Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
      throw std::runtime_error("eigenvalue computation failed");
    }
    return solver.eigenvalues().minCoeff();
  }

  // Zeroes all rows and columns of the listed sites; returns the trace
  // removed. Projects onto the unabsorbed subspace, so positivity survives.
  double absorb(std::span<const int> positions) {
    double removed = 0.0;
    for (int p : positions) {
      if (!contains(p)) continue;
      for (int c = 0; c < 2; ++c) {
        const Eigen::Index k = index_of(p, c);
        removed += matrix_(k, k).real();
        matrix_.row(k).setZero();
        matrix_.col(k).setZero();
      }
    }
    return removed;
  }

 private:
  int min_pos_;
  int max_pos_;
  Eigen::MatrixXcd matrix_;
};

// (I (x) C) rho (I (x) C)^dagger via row and column stripe transforms.
inline DensityState coin_apply(const DensityState& rho, const CoinOperator& coin) {
  DensityState out = rho;
  Eigen::MatrixXcd& m = out.matrix();
  const Eigen::Matrix2cd& c = coin.matrix();
  const Eigen::Matrix2cd cdag = c.adjoint();
  const Eigen::Index d = out.dim();
  for (Eigen::Index r = 0; r < d; r += 2) {
    m.middleRows<2>(r) = c * m.middleRows<2>(r);
  }
  for (Eigen::Index k = 0; k < d; k += 2) {
    m.middleCols<2>(k) = m.middleCols<2>(k) * cdag;
  }
  return out;
}

// Conjugation by the shift permutation. Occupied edge components that
// would leave the window raise an internal error, as for pure states.
inline DensityState shift_apply(const DensityState& rho) {
  const Eigen::Index d = rho.dim();
  const Eigen::Index edge_h = rho.index_of(rho.min_pos(), 0);
  const Eigen::Index edge_v = rho.index_of(rho.max_pos(), 1);
  if (rho.matrix().row(edge_h).cwiseAbs().maxCoeff() != 0.0 ||
      rho.matrix().row(edge_v).cwiseAbs().maxCoeff() != 0.0) {
    throw std::logic_error("shift would move amplitude outside the window");
  }

  // Destination composite index under the shift, or -1 for the outgoing
  // edge components (whose rows/columns are zero by the check above).
  std::vector<Eigen::Index> dest(static_cast<std::size_t>(d), -1);
  for (int j = rho.min_pos(); j <= rho.max_pos(); ++j) {
    if (j > rho.min_pos()) {
      dest[static_cast<std::size_t>(rho.index_of(j, 0))] = rho.index_of(j - 1, 0);
    }
    if (j < rho.max_pos()) {
      dest[static_cast<std::size_t>(rho.index_of(j, 1))] = rho.index_of(j + 1, 1);
    }
  }

  DensityState out(rho.min_pos(), rho.max_pos());
  Eigen::MatrixXcd& m = out.matrix();
  const Eigen::MatrixXcd& src = rho.matrix();
  for (Eigen::Index a = 0; a < d; ++a) {
    if (dest[static_cast<std::size_t>(a)] < 0) continue;
    for (Eigen::Index b = 0; b < d; ++b) {
      if (dest[static_cast<std::size_t>(b)] < 0) continue;
      m(dest[static_cast<std::size_t>(a)], dest[static_cast<std::size_t>(b)]) =
          src(a, b);
    }
  }
  return out;
}

// Position-basis dephasing: off-diagonal position blocks are scaled by
// (1 - q); diagonal blocks, including coin coherence within a site, are
// untouched, so the trace is preserved exactly.
inline DensityState dephase(DensityState rho, double q) {
  if (!(q >= 0.0 && q <= 1.0)) {
    throw std::invalid_argument("dephasing probability q must lie in [0, 1]");
  }
  if (q == 0.0) return rho;
  Eigen::MatrixXcd& m = rho.matrix();
  const Eigen::Index d = rho.dim();
  const double keep = 1.0 - q;
  for (Eigen::Index r = 0; r < d; r += 2) {
    for (Eigen::Index c = 0; c < d; c += 2) {
      if (r == c) continue;
      m.block<2, 2>(r, c) *= keep;
    }
  }
  return rho;
}

// One full channel step: rho -> dephase(W rho W^dagger, q) with W = S C.
inline DensityState step_density(const DensityState& rho, const CoinOperator& coin,
                                 double q) {
  if (!(q >= 0.0 && q <= 1.0)) {
    throw std::invalid_argument("dephasing probability q must lie in [0, 1]");
  }
  return dephase(shift_apply(coin_apply(rho, coin)), q);
}

inline std::pair<DensityState, double> apply_absorber(DensityState rho,
                                                      std::span<const int> positions) {
  const double removed = rho.absorb(positions);
  return {std::move(rho), removed};
}

inline Distribution position_distribution(const DensityState& rho) {
  Distribution d;
  for (int j = rho.min_pos(); j <= rho.max_pos(); ++j) {
    const double p = rho.matrix()(rho.index_of(j, 0), rho.index_of(j, 0)).real() +
                     rho.matrix()(rho.index_of(j, 1), rho.index_of(j, 1)).real();
    if (p > kProbabilityFloor) {
      d.support.push_back(j);
      d.probabilities.push_back(p);
    }
  }
  return d;
}

}  // namespace qwalk
