#pragma once

// Command implementations behind the CLI verbs. Everything returns JSON
// documents; the binary only parses flags, routes here and prints.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "qwalk/apparatus.hpp"
#include "qwalk/config.hpp"
#include "qwalk/csv.hpp"
#include "qwalk/envelope.hpp"
#include "qwalk/evolve.hpp"
#include "qwalk/fit.hpp"
#include "qwalk/statistics.hpp"
#include "qwalk/trajectories.hpp"

namespace qwalk {

namespace detail {

// Log-log slope over the usable step records, when there are enough.
inline std::optional<double> spreading_exponent_of(const WalkRecord& record) {
  std::vector<SpreadStats> stats;
  for (const StepRecord& s : record.steps) {
    if (s.step < 1 || !(s.distribution.mass() > 0.0)) continue;
    const SpreadStats st = spread_stats(s.distribution, s.step);
    if (st.stddev > 0.0) stats.push_back(st);
  }
  if (stats.size() < 3) return std::nullopt;
  return spreading_exponent(stats);
}

}  // namespace detail

// One walk in the configured mode. In trajectories mode the per-step rows
// carry the channel expectation (the ensemble average) and the summary the
// sampled empirical finals.
inline Json cmd_run(const ExperimentConfig& cfg) {
  cfg.validate();
  const StepSchedule schedule = cfg.to_schedule();

  if (cfg.mode == RunMode::trajectories) {
    const WalkRecord expected = evolve(schedule, EvolutionMode::density);
    const TrajectoryEnsemble ensemble =
        sample_trajectories(schedule, cfg.samples, cfg.seed);
    Json summary;
    summary["final_distribution"] = distribution_to_json(ensemble.empirical);
    summary["sample_count"] = ensemble.sample_count;
    summary["absorbed_count"] = ensemble.absorbed_count;
    return make_envelope(cfg, step_records_to_json(expected), summary);
  }

  const EvolutionMode mode =
      cfg.mode == RunMode::pure ? EvolutionMode::pure : EvolutionMode::density;
  const WalkRecord record = evolve(schedule, mode);
  Json summary;
  summary["final_distribution"] =
      distribution_to_json(record.steps.back().distribution);
  if (const auto exponent = detail::spreading_exponent_of(record)) {
    summary["spreading_exponent"] = *exponent;
  }
  return make_envelope(cfg, step_records_to_json(record), summary);
}

// Transmission study: like run, but the config must block at least one site
// and the summary reports the mass that was never absorbed.
inline Json cmd_absorb(const ExperimentConfig& cfg) {
  if (cfg.absorbers.empty()) {
    throw ConfigError("absorbers", "absorb needs at least one absorber");
  }
  cfg.validate();
  const StepSchedule schedule = cfg.to_schedule();

  if (cfg.mode == RunMode::trajectories) {
    const WalkRecord expected = evolve(schedule, EvolutionMode::density);
    const TrajectoryEnsemble ensemble =
        sample_trajectories(schedule, cfg.samples, cfg.seed);
    Json summary;
    summary["final_distribution"] = distribution_to_json(ensemble.empirical);
    summary["transmission"] =
        1.0 - static_cast<double>(ensemble.absorbed_count) /
                  static_cast<double>(ensemble.sample_count);
    summary["sample_count"] = ensemble.sample_count;
    summary["absorbed_count"] = ensemble.absorbed_count;
    return make_envelope(cfg, step_records_to_json(expected), summary);
  }

  const EvolutionMode mode =
      cfg.mode == RunMode::pure ? EvolutionMode::pure : EvolutionMode::density;
  const WalkRecord record = evolve(schedule, mode);
  Json summary;
  summary["final_distribution"] =
      distribution_to_json(record.steps.back().distribution);
  summary["transmission"] = record.remaining_mass();
  summary["cumulative_absorbed"] = record.cumulative_absorbed();
  return make_envelope(cfg, step_records_to_json(record), summary);
}

// One envelope per q, each a density-mode run of the same program with
// every step's q replaced. The summary carries the swept value.
inline Json cmd_sweep_q(const ExperimentConfig& cfg,
                        const std::vector<double>& q_values) {
  Json envelopes = Json::array();
  for (const double q : q_values) {
    if (!(q >= 0.0 && q <= 1.0)) {
      throw ConfigError("q-list", "values must lie in [0, 1]");
    }
    ExperimentConfig sub = cfg;
    sub.qs.assign(static_cast<std::size_t>(cfg.steps), q);
    sub.mode = RunMode::density;
    Json env = cmd_run(sub);
    env["summary"]["q"] = q;
    envelopes.push_back(std::move(env));
  }
  return envelopes;
}

// Recovers q from a measured distribution with the configured walk as the
// model template (the template's own q values are ignored).
inline Json cmd_fit(const Distribution& measured, const ExperimentConfig& cfg) {
  if (measured.empty()) {
    throw std::invalid_argument("measured distribution is empty");
  }
  const double mass = measured.mass();
  if (std::abs(mass - 1.0) > kCsvMassTol) {
    throw std::invalid_argument("measured probabilities sum to " + format_sig(mass) +
                                "; expected 1");
  }
  const FitResult fit = fit_decoherence(normalized(measured), cfg.to_schedule());
  Json out;
  out["q_hat"] = fit.q_hat;
  out["residual"] = fit.residual;
  out["evaluations"] = fit.evaluations;
  out["tool_version"] = kToolVersion;
  return out;
}

inline Json cmd_apparatus_elements(int n) {
  const ElementCount count = element_count(n);
  Json out;
  out["n"] = n;
  out["this_scheme"] = count.this_scheme;
  out["triangular_scheme"] = count.triangular_scheme;
  return out;
}

inline Json cmd_apparatus_loss(int n, double loss_per_step) {
  Json out;
  out["n"] = n;
  out["loss_per_step"] = loss_per_step;
  out["survival_probability"] = survival_probability(n, loss_per_step);
  return out;
}

inline Json cmd_apparatus_visibility(double q) {
  Json out;
  out["q"] = q;
  out["visibility"] = visibility_from_q(q);
  return out;
}

// Calibration helper: from either a measured visibility or a misalignment
// angle (run through the overlap model), report the matching q.
inline Json cmd_apparatus_calibrate(std::optional<double> visibility,
                                    std::optional<double> angle,
                                    const CalibrationModel& model) {
  if (visibility.has_value() == angle.has_value()) {
    throw std::invalid_argument("calibrate needs exactly one of --visibility, --angle");
  }
  Json out;
  if (angle) {
    out["angle"] = *angle;
    const double v = misalignment_to_visibility(*angle, model);
    out["visibility"] = v;
    out["q"] = q_from_visibility(v);
  } else {
    if (!(*visibility >= 0.0 && *visibility <= 1.0)) {
      throw std::invalid_argument("visibility must lie in [0, 1]");
    }
    out["visibility"] = *visibility;
    out["q"] = q_from_visibility(*visibility);
  }
  return out;
}

}  // namespace qwalk
