#pragma once

// Result envelopes: the JSON documents every command prints. Key order is
// fixed by construction and no timestamps are included, so identical inputs
// produce byte-identical output.

#include <utility>

#include "qwalk/config.hpp"
#include "qwalk/distribution.hpp"
#include "qwalk/evolve.hpp"
#include "qwalk/statistics.hpp"
#include "qwalk/version.hpp"

namespace qwalk {

inline Json distribution_to_json(const Distribution& d) {
  Json j;
  j["positions"] = d.support;
  j["probabilities"] = d.probabilities;
  return j;
}

inline Json step_records_to_json(const WalkRecord& record) {
  Json rows = Json::array();
  for (const StepRecord& s : record.steps) {
    Json row;
    row["step"] = s.step;
    row["distribution"] = distribution_to_json(s.distribution);
    if (s.distribution.mass() > 0.0) {
      row["stddev"] = spread_stats(s.distribution, s.step).stddev;
    } else {
      row["stddev"] = nullptr;  // everything absorbed, nothing to condition on
    }
    row["absorbed"] = s.absorbed;
    row["cumulative_absorbed"] = s.cumulative_absorbed;
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Json make_envelope(const ExperimentConfig& cfg, Json per_step, Json summary) {
  Json env;
  env["config_echo"] = cfg.echo;
  env["per_step"] = std::move(per_step);
  env["summary"] = std::move(summary);
  env["tool_version"] = kToolVersion;
  env["seed"] = cfg.seed;
  return env;
}

}  // namespace qwalk
