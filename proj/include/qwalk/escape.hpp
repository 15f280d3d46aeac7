#pragma once

// Long-run transmission past a set of blocked sites. The template supplies
// the per-step coin pattern (repeated cyclically); the blockers are applied
// after every step and the walk runs coherently to max_steps.

#include <algorithm>
#include <span>
#include <stdexcept>
#include <vector>

#include "qwalk/evolve.hpp"
#include "qwalk/schedule.hpp"

namespace qwalk {

struct EscapeEstimate {
  double remaining_mass = 0.0;
  double last_step_absorbed = 0.0;  // increment at the final step
  int steps = 0;
  bool converged = false;  // last increment below the requested tolerance
};

inline EscapeEstimate escape_probability(const StepSchedule& schedule_template,
                                         std::span<const int> absorber_positions,
                                         int max_steps, double tol) {
  schedule_template.validate();
  if (schedule_template.steps.empty()) {
    throw std::invalid_argument("escape estimation needs a non-empty step template");
  }
  if (!schedule_template.all_q_zero()) {
    throw std::invalid_argument("escape estimation runs coherently; template q must be 0");
  }
  if (max_steps < 1) {
    throw std::invalid_argument("escape estimation needs max_steps >= 1");
  }

  std::vector<int> absorbers(absorber_positions.begin(), absorber_positions.end());
  std::sort(absorbers.begin(), absorbers.end());
  absorbers.erase(std::unique(absorbers.begin(), absorbers.end()), absorbers.end());

  StepSchedule schedule;
  schedule.initial_position = schedule_template.initial_position;
  schedule.initial_coin = schedule_template.initial_coin;
  schedule.steps.reserve(static_cast<std::size_t>(max_steps));
  const std::size_t period = schedule_template.steps.size();
  for (int k = 0; k < max_steps; ++k) {
    ScheduleStep step = schedule_template.steps[static_cast<std::size_t>(k) % period];
    step.absorbers = absorbers;
    schedule.steps.push_back(std::move(step));
  }

  const WalkRecord record = evolve(schedule, EvolutionMode::pure);
  EscapeEstimate estimate;
  estimate.remaining_mass = record.remaining_mass();
  estimate.last_step_absorbed = record.steps.back().absorbed;
  estimate.steps = max_steps;
  estimate.converged = estimate.last_step_absorbed < tol;
  return estimate;
}

}  // namespace qwalk
