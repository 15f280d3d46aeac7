#pragma once

// Full-walk driver. Each step applies coin, shift, dephasing (density
// mode) and then any absorbers, recording the position distribution and
// absorption books after every step. The window [initial - N, initial + N]
// is allocated up front from the schedule length, so shifts never overflow.

#include <stdexcept>
#include <vector>

#include "qwalk/density_state.hpp"
#include "qwalk/distribution.hpp"
#include "qwalk/pure_state.hpp"
#include "qwalk/schedule.hpp"

namespace qwalk {

enum class EvolutionMode { pure, density };

struct StepRecord {
  int step = 0;  // 0 is the prepared initial state
  Distribution distribution;
  double absorbed = 0.0;
  double cumulative_absorbed = 0.0;
};

struct WalkRecord {
  std::vector<StepRecord> steps;  // schedule length + 1 entries

  double cumulative_absorbed() const {
    return steps.empty() ? 0.0 : steps.back().cumulative_absorbed;
  }
  double remaining_mass() const {
    return steps.empty() ? 0.0 : steps.back().distribution.mass();
  }
};

// Per-step absorption summary derived from a walk record.
struct AbsorptionRecord {
  std::vector<double> per_step_absorbed;
  double cumulative_absorbed = 0.0;
  double remaining_mass = 0.0;
};

inline AbsorptionRecord absorption_record(const WalkRecord& record) {
  AbsorptionRecord out;
  for (const StepRecord& s : record.steps) {
    if (s.step > 0) out.per_step_absorbed.push_back(s.absorbed);
  }
  out.cumulative_absorbed = record.cumulative_absorbed();
  out.remaining_mass = record.remaining_mass();
  return out;
}

inline WalkRecord evolve(const StepSchedule& schedule, EvolutionMode mode) {
  schedule.validate();
  if (mode == EvolutionMode::pure && !schedule.all_q_zero()) {
    throw std::invalid_argument(
        "pure evolution requires q = 0 at every step; use density mode");
  }

  const int n = schedule.step_count();
  const int lo = schedule.initial_position - n;
  const int hi = schedule.initial_position + n;

  WalkRecord record;
  record.steps.reserve(static_cast<std::size_t>(n) + 1);
  double cumulative = 0.0;

  auto record_step = [&](int step, Distribution dist, double absorbed) {
    cumulative += absorbed;
    record.steps.push_back(StepRecord{step, std::move(dist), absorbed, cumulative});
  };

  if (mode == EvolutionMode::pure) {
    PureState state = PureState::point(schedule.initial_position,
                                       schedule.initial_coin, lo, hi);
    record_step(0, position_distribution(state), 0.0);
    for (int k = 0; k < n; ++k) {
      const ScheduleStep& s = schedule.steps[static_cast<std::size_t>(k)];
      state = step_pure(state, s.coin);
      const double absorbed = state.absorb(s.absorbers);
      record_step(k + 1, position_distribution(state), absorbed);
    }
  } else {
    DensityState state = DensityState::point(schedule.initial_position,
                                             schedule.initial_coin, lo, hi);
    record_step(0, position_distribution(state), 0.0);
    for (int k = 0; k < n; ++k) {
      const ScheduleStep& s = schedule.steps[static_cast<std::size_t>(k)];
      state = step_density(state, s.coin, s.q);
      const double absorbed = state.absorb(s.absorbers);
      record_step(k + 1, position_distribution(state), absorbed);
    }
  }
  return record;
}

}  // namespace qwalk
