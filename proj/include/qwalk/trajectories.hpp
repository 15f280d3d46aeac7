#pragma once

// Monte-Carlo unraveling of the dephasing walk. Each trajectory evolves a
// pure state; after the shift of step k, a Bernoulli(q_k) draw decides
// whether the position register is measured and the state collapsed onto
// the outcome. Absorbers become Bernoulli termination events with the
// blocked mass as the success probability. Both branchings average back to
// the density-matrix channel by linearity, which the tests assert rather
// than assume.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "qwalk/distribution.hpp"
#include "qwalk/pure_state.hpp"
#include "qwalk/schedule.hpp"

namespace qwalk {

// Tiny splittable generator (Steele et al.'s SplitMix64 finalizer). Each
// trajectory runs its own stream derived from the root seed, so results are
// reproducible across platforms and any worker partition.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform double in [0, 1), 53 random bits. Hand-rolled so streams do not
  // depend on a standard-library distribution implementation.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

struct TrajectoryEnsemble {
  int sample_count = 0;
  std::uint64_t seed = 0;
  Distribution empirical;  // final measured positions of surviving trajectories
  int absorbed_count = 0;  // trajectories terminated at an absorber
};

namespace detail {

// Samples a position from the state's site masses and collapses onto it,
// renormalizing. The coin state at the chosen site is kept: the measurement
// acts on the position register only.
inline void collapse_position(PureState& state, SplitMix64& rng) {
  const double total = state.norm2();
  const double u = rng.uniform() * total;
  double acc = 0.0;
  int chosen = state.max_pos();
  for (int j = state.min_pos(); j <= state.max_pos(); ++j) {
    acc += state.at(j).norm2();
    if (u < acc) {
      chosen = j;
      break;
    }
  }
  const double site_mass = state.at(chosen).norm2();
  const double scale = 1.0 / std::sqrt(site_mass);
  for (int j = state.min_pos(); j <= state.max_pos(); ++j) {
    if (j == chosen) {
      state.at(j).h *= scale;
      state.at(j).v *= scale;
    } else {
      state.at(j) = CoinState{};
    }
  }
}

// Samples the final position measurement.
inline int sample_position(const PureState& state, SplitMix64& rng) {
  const double total = state.norm2();
  const double u = rng.uniform() * total;
  double acc = 0.0;
  for (int j = state.min_pos(); j <= state.max_pos(); ++j) {
    acc += state.at(j).norm2();
    if (u < acc) return j;
  }
  return state.max_pos();
}

}  // namespace detail

inline TrajectoryEnsemble sample_trajectories(const StepSchedule& schedule,
                                              int samples, std::uint64_t seed) {
  schedule.validate();
  if (samples < 1) {
    throw std::invalid_argument("trajectory sampling needs samples >= 1");
  }

  const int n = schedule.step_count();
  const int lo = schedule.initial_position - n;
  const int hi = schedule.initial_position + n;

  // Per-trajectory seeds are drawn from the root stream up front; a worker
  // fan-out would partition this list and still reproduce the ensemble.
  SplitMix64 root(seed);
  std::vector<std::uint64_t> trajectory_seeds(static_cast<std::size_t>(samples));
  for (std::uint64_t& s : trajectory_seeds) s = root.next();

  std::vector<std::int64_t> counts(static_cast<std::size_t>(hi - lo + 1), 0);
  int absorbed_count = 0;

  for (int t = 0; t < samples; ++t) {
    SplitMix64 rng(trajectory_seeds[static_cast<std::size_t>(t)]);
    PureState state = PureState::point(schedule.initial_position,
                                       schedule.initial_coin, lo, hi);
    bool absorbed = false;
    for (const ScheduleStep& s : schedule.steps) {
      state = step_pure(state, s.coin);
      if (s.q > 0.0 && rng.uniform() < s.q) {
        detail::collapse_position(state, rng);
      }
      if (!s.absorbers.empty()) {
        double blocked = 0.0;
        for (int p : s.absorbers) {
          if (state.contains(p)) blocked += state.at(p).norm2();
        }
        if (blocked > 0.0) {
          if (rng.uniform() < blocked / state.norm2()) {
            absorbed = true;
            break;
          }
          const double survive = state.norm2() - blocked;
          const double scale = 1.0 / std::sqrt(survive / state.norm2());
          for (int p : s.absorbers) {
            if (state.contains(p)) state.at(p) = CoinState{};
          }
          for (int j = state.min_pos(); j <= state.max_pos(); ++j) {
            state.at(j).h *= scale;
            state.at(j).v *= scale;
          }
        }
      }
    }
    if (absorbed) {
      ++absorbed_count;
      continue;
    }
    const int final_pos = detail::sample_position(state, rng);
    ++counts[static_cast<std::size_t>(final_pos - lo)];
  }

  TrajectoryEnsemble ensemble;
  ensemble.sample_count = samples;
  ensemble.seed = seed;
  ensemble.absorbed_count = absorbed_count;
  const int survivors = samples - absorbed_count;
  if (survivors > 0) {
    for (int j = lo; j <= hi; ++j) {
      const std::int64_t c = counts[static_cast<std::size_t>(j - lo)];
      if (c > 0) {
        ensemble.empirical.support.push_back(j);
        ensemble.empirical.probabilities.push_back(
            static_cast<double>(c) / static_cast<double>(survivors));
      }
    }
  }
  return ensemble;
}

}  // namespace qwalk
