#pragma once

// Experiment configuration: JSON documents describing one walk run. Every
// validation failure names the offending field so automation can tell user
// fault from engine fault.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "qwalk/coin.hpp"
#include "qwalk/schedule.hpp"
#include "qwalk/tolerances.hpp"

namespace qwalk {

using Json = nlohmann::ordered_json;

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error("config field '" + field + "': " + message),
        field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

enum class RunMode { pure, density, trajectories };

inline RunMode run_mode_from_name(const std::string& name) {
  if (name == "pure") return RunMode::pure;
  if (name == "density") return RunMode::density;
  if (name == "trajectories") return RunMode::trajectories;
  throw ConfigError("mode", "must be one of pure, density, trajectories");
}

inline const char* run_mode_name(RunMode mode) {
  switch (mode) {
    case RunMode::pure: return "pure";
    case RunMode::density: return "density";
    case RunMode::trajectories: return "trajectories";
  }
  return "";
}

// One blocked site, active after steps from_step..to_step (1-based, inclusive).
struct AbsorberSpec {
  int position = 0;
  int from_step = 1;
  int to_step = 0;
};

struct ExperimentConfig {
  int steps = 0;
  CoinState initial_coin = coin_state_from_name("L");
  int initial_position = 0;
  std::vector<CoinOperator> coins;  // expanded to one entry per step
  std::vector<double> qs;           // one entry per step
  std::vector<AbsorberSpec> absorbers;
  RunMode mode = RunMode::pure;
  bool mode_explicit = false;
  int samples = 10000;
  std::uint64_t seed = 0;
  Json echo;  // the document as parsed, echoed verbatim into results

  bool all_q_zero() const {
    for (double q : qs) {
      if (q != 0.0) return false;
    }
    return true;
  }

  StepSchedule to_schedule() const {
    StepSchedule schedule;
    schedule.initial_position = initial_position;
    schedule.initial_coin = initial_coin;
    schedule.steps.reserve(static_cast<std::size_t>(steps));
    for (int k = 0; k < steps; ++k) {
      std::vector<int> sites;
      for (const AbsorberSpec& a : absorbers) {
        if (k + 1 >= a.from_step && k + 1 <= a.to_step) sites.push_back(a.position);
      }
      std::sort(sites.begin(), sites.end());
      sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
      schedule.steps.push_back(ScheduleStep{coins[static_cast<std::size_t>(k)],
                                            qs[static_cast<std::size_t>(k)],
                                            std::move(sites)});
    }
    return schedule;
  }

  // Cross-field checks, run after any command-line overrides are applied.
  void validate() const {
    if (mode == RunMode::pure && !all_q_zero()) {
      throw ConfigError("mode", "mode 'pure' requires q = 0 at every step");
    }
    if (mode == RunMode::trajectories && samples < 1) {
      throw ConfigError("samples", "trajectories mode needs samples >= 1");
    }
  }
};

namespace detail {

inline int require_int(const Json& value, const char* field) {
  if (!value.is_number_integer()) throw ConfigError(field, "must be an integer");
  return value.get<int>();
}

inline double require_number(const Json& value, const char* field) {
  if (!value.is_number()) throw ConfigError(field, "must be a number");
  return value.get<double>();
}

inline CoinState parse_initial_coin(const Json& value) {
  if (value.is_string()) {
    try {
      return coin_state_from_name(value.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ConfigError("initial_coin", e.what());
    }
  }
  if (value.is_array() && value.size() == 2) {
    Complex parts[2];
    for (std::size_t i = 0; i < 2; ++i) {
      const Json& entry = value[i];
      if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() ||
          !entry[1].is_number()) {
        throw ConfigError("initial_coin",
                          "explicit amplitudes must be [[re,im],[re,im]]");
      }
      parts[i] = Complex{entry[0].get<double>(), entry[1].get<double>()};
    }
    CoinState state{parts[0], parts[1]};
    if (std::abs(state.norm2() - 1.0) > kStateNormTol) {
      throw ConfigError("initial_coin", "amplitudes must be normalized");
    }
    return state;
  }
  throw ConfigError("initial_coin",
                    "must be a named state or an explicit amplitude pair");
}

inline CoinOperator parse_coin_entry(const Json& value) {
  if (value.is_string()) {
    const std::string name = value.get<std::string>();
    if (name == "hadamard") return hadamard_coin();
    if (name == "identity") return identity_coin();
    throw ConfigError("coin", "unknown coin '" + name +
                                  "'; use \"hadamard\", \"identity\" or a "
                                  "half-wave angle in degrees");
  }
  if (value.is_number()) {
    return waveplate_unitary(WaveplateKind::half, value.get<double>());
  }
  throw ConfigError("coin", "entries must be a coin name or an angle in degrees");
}

inline AbsorberSpec parse_absorber_entry(const Json& value, int steps) {
  AbsorberSpec spec;
  spec.from_step = 1;
  spec.to_step = steps;
  if (value.is_number_integer()) {
    spec.position = value.get<int>();
    return spec;
  }
  if (value.is_object()) {
    for (auto it = value.begin(); it != value.end(); ++it) {
      if (it.key() != "position" && it.key() != "from_step" && it.key() != "to_step") {
        throw ConfigError("absorbers", "unknown key '" + it.key() + "'");
      }
    }
    if (!value.contains("position")) {
      throw ConfigError("absorbers", "each entry needs a position");
    }
    spec.position = require_int(value["position"], "absorbers");
    if (value.contains("from_step")) {
      spec.from_step = require_int(value["from_step"], "absorbers");
    }
    if (value.contains("to_step")) {
      spec.to_step = require_int(value["to_step"], "absorbers");
    }
    if (spec.from_step < 1 || spec.to_step > steps || spec.from_step > spec.to_step) {
      throw ConfigError("absorbers", "step range must satisfy 1 <= from_step <= "
                                     "to_step <= steps");
    }
    return spec;
  }
  throw ConfigError("absorbers",
                    "entries must be a position or {position, from_step, to_step}");
}

}  // namespace detail

inline ExperimentConfig parse_config(const Json& doc) {
  if (!doc.is_object()) {
    throw ConfigError("config", "document must be a JSON object");
  }
  static const std::set<std::string> known = {
      "version", "steps",     "initial_coin", "initial_position", "coin",
      "q",       "absorbers", "mode",         "samples",          "seed"};
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (known.find(it.key()) == known.end()) {
      throw ConfigError(it.key(), "unknown field");
    }
  }

  if (!doc.contains("version")) throw ConfigError("version", "missing");
  if (!doc["version"].is_number_integer() || doc["version"].get<int>() != 1) {
    throw ConfigError("version", "must be the integer 1");
  }

  ExperimentConfig cfg;
  cfg.echo = doc;

  if (!doc.contains("steps")) throw ConfigError("steps", "missing");
  cfg.steps = detail::require_int(doc["steps"], "steps");
  if (cfg.steps < 0) throw ConfigError("steps", "must be >= 0");

  if (doc.contains("initial_coin")) {
    cfg.initial_coin = detail::parse_initial_coin(doc["initial_coin"]);
  }
  if (doc.contains("initial_position")) {
    cfg.initial_position = detail::require_int(doc["initial_position"],
                                               "initial_position");
  }

  const std::size_t n = static_cast<std::size_t>(cfg.steps);
  if (doc.contains("coin") && doc["coin"].is_array()) {
    if (doc["coin"].size() != n) {
      throw ConfigError("coin", "per-step list must have one entry per step");
    }
    for (const Json& entry : doc["coin"]) {
      cfg.coins.push_back(detail::parse_coin_entry(entry));
    }
  } else {
    const CoinOperator coin = doc.contains("coin")
                                  ? detail::parse_coin_entry(doc["coin"])
                                  : hadamard_coin();
    cfg.coins.assign(n, coin);
  }

  if (doc.contains("q") && doc["q"].is_array()) {
    if (doc["q"].size() != n) {
      throw ConfigError("q", "per-step list must have one entry per step");
    }
    for (const Json& entry : doc["q"]) {
      cfg.qs.push_back(detail::require_number(entry, "q"));
    }
  } else {
    const double q = doc.contains("q") ? detail::require_number(doc["q"], "q") : 0.0;
    cfg.qs.assign(n, q);
  }
  for (double q : cfg.qs) {
    if (!(q >= 0.0 && q <= 1.0)) throw ConfigError("q", "values must lie in [0, 1]");
  }

  if (doc.contains("absorbers")) {
    if (!doc["absorbers"].is_array()) {
      throw ConfigError("absorbers", "must be a list");
    }
    for (const Json& entry : doc["absorbers"]) {
      cfg.absorbers.push_back(detail::parse_absorber_entry(entry, cfg.steps));
    }
  }

  if (doc.contains("mode")) {
    if (!doc["mode"].is_string()) throw ConfigError("mode", "must be a string");
    cfg.mode = run_mode_from_name(doc["mode"].get<std::string>());
    cfg.mode_explicit = true;
  } else {
    cfg.mode = cfg.all_q_zero() ? RunMode::pure : RunMode::density;
  }

  if (doc.contains("samples")) {
    cfg.samples = detail::require_int(doc["samples"], "samples");
    if (cfg.samples < 1) throw ConfigError("samples", "must be >= 1");
  }

  if (doc.contains("seed")) {
    const Json& s = doc["seed"];
    if (!s.is_number_integer() || (s.is_number_integer() && !s.is_number_unsigned() &&
                                   s.get<std::int64_t>() < 0)) {
      throw ConfigError("seed", "must be a non-negative integer");
    }
    cfg.seed = s.get<std::uint64_t>();
  }

  cfg.validate();
  return cfg;
}

inline ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("config", std::string("JSON parse error: ") + e.what());
  }
  return parse_config(doc);
}

}  // namespace qwalk
