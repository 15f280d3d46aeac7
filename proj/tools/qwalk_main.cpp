// qwalk: coined discrete-time walk simulator with tunable per-step
// dephasing and absorbing sites. Verbs: run, sweep-q, absorb, fit,
// apparatus. JSON envelopes on stdout, diagnostics on stderr; exit 0 on
// success, 2 on input or validation errors, 3 on numerical failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "qwalk/commands.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::string csv_path;
  std::string mode;
  std::uint64_t seed = 0;
  int samples = 0;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool with_mode) {
  cmd->add_option("--config", flags.config_path, "experiment config (JSON)")
      ->required();
  cmd->add_option("--csv", flags.csv_path, "also write results as CSV");
  cmd->add_option("--seed", flags.seed, "override the config seed");
  if (with_mode) {
    cmd->add_option("--mode", flags.mode, "pure, density or trajectories");
    cmd->add_option("--samples", flags.samples,
                    "trajectory count (trajectories mode)");
  }
}

bool flag_given(const CLI::App* cmd, const std::string& name) {
  const CLI::Option* opt = cmd->get_option_no_throw(name);
  return opt != nullptr && opt->count() > 0;
}

qwalk::ExperimentConfig load_with_overrides(const CLI::App* cmd,
                                            const CommonFlags& flags) {
  qwalk::ExperimentConfig cfg = qwalk::load_config_file(flags.config_path);
  if (flag_given(cmd, "--mode")) {
    cfg.mode = qwalk::run_mode_from_name(flags.mode);
    cfg.mode_explicit = true;
  }
  if (flag_given(cmd, "--seed")) cfg.seed = flags.seed;
  if (flag_given(cmd, "--samples")) {
    if (flags.samples < 1) throw qwalk::ConfigError("samples", "must be >= 1");
    cfg.samples = flags.samples;
  }
  cfg.validate();
  return cfg;
}

void write_csv_file(const std::string& path, const qwalk::Json& doc, bool sweep) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write csv file '" + path + "'");
  if (sweep) {
    qwalk::write_sweep_csv(out, doc);
  } else {
    qwalk::write_run_csv(out, doc);
  }
}

void print_json(const qwalk::Json& doc) { std::cout << doc.dump(2) << "\n"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coined quantum walk simulator with tunable dephasing"};
  app.require_subcommand(1);

  CommonFlags run_flags;
  CLI::App* run = app.add_subcommand("run", "run one walk experiment");
  add_common(run, run_flags, true);

  CommonFlags sweep_flags;
  std::vector<double> q_list;
  CLI::App* sweep = app.add_subcommand(
      "sweep-q", "run the configured walk across a list of dephasing values");
  add_common(sweep, sweep_flags, false);
  sweep->add_option("--q-list", q_list, "comma-separated dephasing values")
      ->delimiter(',');

  CommonFlags absorb_flags;
  CLI::App* absorb =
      app.add_subcommand("absorb", "transmission past configured absorbers");
  add_common(absorb, absorb_flags, true);

  std::string measured_path;
  CommonFlags fit_flags;
  CLI::App* fit = app.add_subcommand(
      "fit", "recover q from a measured distribution (least squares)");
  fit->add_option("--config", fit_flags.config_path,
                  "walk template config (JSON)")
      ->required();
  fit->add_option("--measured", measured_path,
                  "measured distribution CSV (position,probability)")
      ->required();

  CLI::App* apparatus =
      app.add_subcommand("apparatus", "optical implementation bookkeeping");
  apparatus->require_subcommand(1);

  int elements_n = 0;
  CLI::App* elements =
      apparatus->add_subcommand("elements", "optical element counts for N steps");
  elements->add_option("--n", elements_n, "number of steps")->required();

  int loss_n = 0;
  double loss_rate = 0.0;
  CLI::App* loss = apparatus->add_subcommand("loss", "survival after N lossy steps");
  loss->add_option("--n", loss_n, "number of steps")->required();
  loss->add_option("--rate", loss_rate, "loss per step in [0,1)")->required();

  double visibility_q = 0.0;
  CLI::App* visibility = apparatus->add_subcommand(
      "visibility", "interference visibility at a given dephasing q");
  visibility->add_option("--q", visibility_q, "dephasing probability")->required();

  double calibrate_visibility = 0.0;
  double calibrate_angle = 0.0;
  double calibrate_zero_angle = 10.5;
  double calibrate_floor = 0.005;
  CLI::App* calibrate = apparatus->add_subcommand(
      "calibrate", "map a visibility or misalignment angle to q");
  calibrate->add_option("--visibility", calibrate_visibility, "measured visibility");
  calibrate->add_option("--angle", calibrate_angle,
                        "displacer misalignment angle in degrees");
  calibrate->add_option("--zero-angle", calibrate_zero_angle,
                        "angle at which visibility reads 0");
  calibrate->add_option("--floor", calibrate_floor,
                        "visibility readout floor");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (run->parsed()) {
      const qwalk::Json env = qwalk::cmd_run(load_with_overrides(run, run_flags));
      print_json(env);
      if (!run_flags.csv_path.empty()) write_csv_file(run_flags.csv_path, env, false);
    } else if (sweep->parsed()) {
      qwalk::ExperimentConfig cfg = load_with_overrides(sweep, sweep_flags);
      const qwalk::Json envelopes = qwalk::cmd_sweep_q(cfg, q_list);
      print_json(envelopes);
      if (!sweep_flags.csv_path.empty()) {
        write_csv_file(sweep_flags.csv_path, envelopes, true);
      }
    } else if (absorb->parsed()) {
      const qwalk::Json env =
          qwalk::cmd_absorb(load_with_overrides(absorb, absorb_flags));
      print_json(env);
      if (!absorb_flags.csv_path.empty()) {
        write_csv_file(absorb_flags.csv_path, env, false);
      }
    } else if (fit->parsed()) {
      std::ifstream in(measured_path);
      if (!in) {
        throw std::invalid_argument("cannot open measured csv '" + measured_path +
                                    "'");
      }
      const qwalk::Distribution measured = qwalk::parse_distribution_csv(in);
      const qwalk::ExperimentConfig cfg =
          qwalk::load_config_file(fit_flags.config_path);
      print_json(qwalk::cmd_fit(measured, cfg));
    } else if (elements->parsed()) {
      print_json(qwalk::cmd_apparatus_elements(elements_n));
    } else if (loss->parsed()) {
      print_json(qwalk::cmd_apparatus_loss(loss_n, loss_rate));
    } else if (visibility->parsed()) {
      print_json(qwalk::cmd_apparatus_visibility(visibility_q));
    } else if (calibrate->parsed()) {
      std::optional<double> v;
      std::optional<double> a;
      if (calibrate->count("--visibility") > 0) v = calibrate_visibility;
      if (calibrate->count("--angle") > 0) a = calibrate_angle;
      qwalk::CalibrationModel model;
      model.zero_visibility_angle = calibrate_zero_angle;
      model.floor = calibrate_floor;
      print_json(qwalk::cmd_apparatus_calibrate(v, a, model));
    }
  } catch (const qwalk::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
