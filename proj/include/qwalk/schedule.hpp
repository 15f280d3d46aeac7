#pragma once

// Experiment programs: per-step coin, dephasing probability and absorber
// set, plus the initial walker configuration.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "qwalk/coin.hpp"
#include "qwalk/tolerances.hpp"

namespace qwalk {

struct ScheduleStep {
  CoinOperator coin;
  double q = 0.0;
  std::vector<int> absorbers;  // sites blocked after this step, sorted
};

struct StepSchedule {
  std::vector<ScheduleStep> steps;
  int initial_position = 0;
  CoinState initial_coin = coin_state_from_name("L");

  int step_count() const { return static_cast<int>(steps.size()); }

  void validate() const {
    if (std::abs(initial_coin.norm2() - 1.0) > kStateNormTol) {
      throw std::invalid_argument("initial coin state must be normalized");
    }
    for (const ScheduleStep& s : steps) {
      if (!(s.q >= 0.0 && s.q <= 1.0)) {
        throw std::invalid_argument("dephasing probability q must lie in [0, 1]");
      }
    }
  }

  bool all_q_zero() const {
    return std::all_of(steps.begin(), steps.end(),
                       [](const ScheduleStep& s) { return s.q == 0.0; });
  }

  // n identical steps; absorbers (if any) are active after every step.
  static StepSchedule uniform(int n, const CoinOperator& coin, double q,
                              const CoinState& initial_coin, int initial_position = 0,
                              std::vector<int> absorbers = {}) {
    if (n < 0) throw std::invalid_argument("schedule length must be >= 0");
    std::sort(absorbers.begin(), absorbers.end());
    StepSchedule schedule;
    schedule.initial_position = initial_position;
    schedule.initial_coin = initial_coin;
    schedule.steps.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      schedule.steps.push_back(ScheduleStep{coin, q, absorbers});
    }
    return schedule;
  }

  StepSchedule with_uniform_q(double q) const {
    StepSchedule out = *this;
    for (ScheduleStep& s : out.steps) s.q = q;
    return out;
  }
};

}  // namespace qwalk
