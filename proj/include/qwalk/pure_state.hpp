#pragma once

// Coherent walker states on a bounded integer lattice window and the
// primitive moves acting on them. Shift convention: the H component of
// site j moves to j-1, the V component to j+1.

#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qwalk/coin.hpp"
#include "qwalk/distribution.hpp"
#include "qwalk/tolerances.hpp"

namespace qwalk {

class PureState {
 public:
  PureState(int min_pos, int max_pos)
      : min_pos_(min_pos), max_pos_(max_pos) {
    if (max_pos < min_pos) {
      throw std::invalid_argument("pure state window is empty");
    }
    amps_.resize(static_cast<std::size_t>(max_pos - min_pos + 1));
  }

  static PureState point(int position, const CoinState& coin, int min_pos,
                         int max_pos) {
    PureState s(min_pos, max_pos);
    s.at(position) = coin;
    return s;
  }

  int min_pos() const { return min_pos_; }
  int max_pos() const { return max_pos_; }
  int window_length() const { return max_pos_ - min_pos_ + 1; }

  bool contains(int position) const {
    return position >= min_pos_ && position <= max_pos_;
  }

  const CoinState& at(int position) const {
    check_position(position);
    return amps_[static_cast<std::size_t>(position - min_pos_)];
  }
  CoinState& at(int position) {
    check_position(position);
    return amps_[static_cast<std::size_t>(position - min_pos_)];
  }

  double norm2() const {
    double n = 0.0;
    for (const CoinState& a : amps_) n += a.norm2();
    return n;
  }

  // Zeroes the listed sites; returns the mass removed. The state is left
  // unnormalized so the caller can keep absorption books.
  double absorb(std::span<const int> positions) {
    double removed = 0.0;
    for (int p : positions) {
      if (!contains(p)) continue;
      CoinState& a = at(p);
      removed += a.norm2();
      a = CoinState{};
    }
    return removed;
  }

 private:
  void check_position(int position) const {
    if (!contains(position)) {
      throw std::logic_error("lattice position outside state window");
    }
  }

  int min_pos_;
  int max_pos_;
  std::vector<CoinState> amps_;
};

// Applies the coin unitary at every site.
inline PureState coin_apply(const PureState& state, const CoinOperator& coin) {
  PureState out(state.min_pos(), state.max_pos());
  for (int j = state.min_pos(); j <= state.max_pos(); ++j) {
    out.at(j) = coin.apply(state.at(j));
  }
  return out;
}

// Conditional translation: H amplitudes move one site left, V amplitudes
// one site right. Values are moved bit-exactly, so the norm is preserved.
// Nonzero amplitude that would leave the window is an internal error; the
// evolution driver sizes windows so it cannot happen.
inline PureState shift_apply(const PureState& state) {
  if (state.at(state.min_pos()).h != Complex{0.0, 0.0} ||
      state.at(state.max_pos()).v != Complex{0.0, 0.0}) {
    throw std::logic_error("shift would move amplitude outside the window");
  }
  PureState out(state.min_pos(), state.max_pos());
  for (int j = state.min_pos(); j <= state.max_pos(); ++j) {
    const CoinState& a = state.at(j);
    if (j > state.min_pos()) out.at(j - 1).h = a.h;
    if (j < state.max_pos()) out.at(j + 1).v = a.v;
  }
  return out;
}

// One full walk step W = S C.
inline PureState step_pure(const PureState& state, const CoinOperator& coin) {
  return shift_apply(coin_apply(state, coin));
}

inline std::pair<PureState, double> apply_absorber(PureState state,
                                                   std::span<const int> positions) {
  const double removed = state.absorb(positions);
  return {std::move(state), removed};
}

inline Distribution position_distribution(const PureState& state) {
  Distribution d;
  for (int j = state.min_pos(); j <= state.max_pos(); ++j) {
    const double p = state.at(j).norm2();
    if (p > kProbabilityFloor) {
      d.support.push_back(j);
      d.probabilities.push_back(p);
    }
  }
  return d;
}

}  // namespace qwalk
