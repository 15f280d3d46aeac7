#pragma once

// Least-squares recovery of the dephasing probability from a measured
// position distribution. The objective is one-dimensional and cheap, so a
// coarse grid locates the basin and golden-section search refines it.

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qwalk/distribution.hpp"
#include "qwalk/evolve.hpp"
#include "qwalk/schedule.hpp"
#include "qwalk/statistics.hpp"
#include "qwalk/tolerances.hpp"

namespace qwalk {

struct FitResult {
  double q_hat = 0.0;
  double residual = 0.0;  // sum of squared probability differences
  int evaluations = 0;
};

namespace detail {

// Sum of (p_model - p_measured)^2 over the union support.
inline double squared_residual(const Distribution& model, const Distribution& measured) {
  double sum = 0.0;
  std::size_t a = 0, b = 0;
  while (a < model.support.size() || b < measured.support.size()) {
    if (b >= measured.support.size() ||
        (a < model.support.size() && model.support[a] < measured.support[b])) {
      sum += model.probabilities[a] * model.probabilities[a];
      ++a;
    } else if (a >= model.support.size() ||
               measured.support[b] < model.support[a]) {
      sum += measured.probabilities[b] * measured.probabilities[b];
      ++b;
    } else {
      const double d = model.probabilities[a] - measured.probabilities[b];
      sum += d * d;
      ++a;
      ++b;
    }
  }
  return sum;
}

}  // namespace detail

// Fits a single uniform q to `measured`. The model at each candidate q is
// the density evolution of `schedule_template` with every step's q replaced.
// The returned pair always carries the best value seen across the grid and
// the refinement, so the residual at q_hat never exceeds either endpoint's.
inline FitResult fit_decoherence(const Distribution& measured,
                                 const StepSchedule& schedule_template) {
  if (measured.empty()) {
    throw std::invalid_argument("fit needs a non-empty measured distribution");
  }
  if (std::abs(measured.mass() - 1.0) > kNormalizedMassTol) {
    throw std::invalid_argument("fit needs a normalized measured distribution");
  }
  schedule_template.validate();

  FitResult best;
  best.residual = std::numeric_limits<double>::infinity();
  int evaluations = 0;
  auto objective = [&](double q) {
    const WalkRecord record =
        evolve(schedule_template.with_uniform_q(q), EvolutionMode::density);
    const double r =
        detail::squared_residual(record.steps.back().distribution, measured);
    ++evaluations;
    if (r < best.residual) {
      best.q_hat = q;
      best.residual = r;
    }
    return r;
  };

  const int grid = kFitGridPoints;
  int best_idx = 0;
  double best_grid = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid; ++i) {
    const double q = static_cast<double>(i) / static_cast<double>(grid - 1);
    const double r = objective(q);
    if (r < best_grid) {
      best_grid = r;
      best_idx = i;
    }
  }

  // Golden-section refinement inside the grid cell pair around the minimum.
  const double h = 1.0 / static_cast<double>(grid - 1);
  double lo = std::max(0.0, static_cast<double>(best_idx) * h - h);
  double hi = std::min(1.0, static_cast<double>(best_idx) * h + h);
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = objective(x1);
  double f2 = objective(x2);
  while (hi - lo > kFitQResolution) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = objective(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = objective(x2);
    }
  }

  best.evaluations = evaluations;
  return best;
}

}  // namespace qwalk
