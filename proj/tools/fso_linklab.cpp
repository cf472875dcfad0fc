// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 FSO LinkLab authors
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "fso/analysis.hpp"
#include "fso/csv_report.hpp"
#include "fso/scenario.hpp"
#include "fso/simulation.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitValidation = 3;
constexpr int kExitNumerical = 4;
constexpr int kExitTargetUnreachable = 5;

struct Overrides {
  std::optional<double> snr_start, snr_stop, snr_step, target_ber;
  std::optional<std::uint64_t> mc_trials, seed;
  std::optional<int> partitions, quadrature_order;
  std::optional<std::string> sigma_mode;

  void attach(CLI::App* cmd) {
    cmd->add_option("--snr-start", snr_start, "sweep start, dB");
    cmd->add_option("--snr-stop", snr_stop, "sweep stop, dB");
    cmd->add_option("--snr-step", snr_step, "sweep step, dB");
    cmd->add_option("--target-ber", target_ber, "target BER for crossings");
    cmd->add_option("--mc-trials", mc_trials,
                    "enable Monte-Carlo columns with this many bits (0 = auto)");
    cmd->add_option("--seed", seed, "Monte-Carlo seed");
    cmd->add_option("--partitions", partitions, "Monte-Carlo partitions");
    cmd->add_option("--quadrature-order", quadrature_order, "Gauss-Hermite order");
    cmd->add_option("--sigma-mode", sigma_mode, "from_si or from_cn2")
        ->check(CLI::IsMember({"from_si", "from_cn2"}));
  }

  std::vector<std::string> apply(fso::LinkScenario& s) const {
    std::vector<std::string> applied;
    if (snr_start) { s.snr.start = *snr_start; applied.push_back("snr_start"); }
    if (snr_stop) { s.snr.stop = *snr_stop; applied.push_back("snr_stop"); }
    if (snr_step) { s.snr.step = *snr_step; applied.push_back("snr_step"); }
    if (target_ber) { s.target_ber = *target_ber; applied.push_back("target_ber"); }
    if (mc_trials) {
      s.mc_enabled = true;
      s.mc.trials = *mc_trials;
      applied.push_back("mc_trials");
    }
    if (seed) { s.mc.seed = *seed; applied.push_back("seed"); }
    if (partitions) { s.mc.partitions = *partitions; applied.push_back("partitions"); }
    if (quadrature_order) {
      s.quadrature_order = *quadrature_order;
      applied.push_back("quadrature_order");
    }
    if (sigma_mode) {
      s.sigma_mode = *sigma_mode == "from_si" ? fso::SigmaMode::from_si
                                              : fso::SigmaMode::from_cn2;
      applied.push_back("sigma_mode");
    }
    return applied;
  }
};

fso::LinkScenario load_scenario(const std::string& config_path,
                                const std::string& preset) {
  if (!config_path.empty() && !preset.empty()) {
    throw fso::scenario_validation_error("give either --config or --preset, not both");
  }
  if (!config_path.empty()) return fso::load_scenario_file(config_path);
  if (!preset.empty()) {
    try {
      return fso::preset_scenario(preset);
    } catch (const std::invalid_argument& e) {
      std::string names;
      for (const auto& n : fso::preset_names()) names += "\n  " + n;
      throw fso::scenario_validation_error(std::string(e.what()) +
                                           "; available presets:" + names);
    }
  }
  throw fso::scenario_validation_error("one of --config or --preset is required");
}

void attach_mc(fso::BerCurve& curve, const fso::LinkScenario& scenario) {
  if (!scenario.mc_enabled) return;
  fso::SimulationParams params = scenario.mc;
  if (params.trials == 0) {
    params.trials = fso::trials_schedule(scenario.target_ber, 100'000'000ULL);
  }
  params.error_model = scenario.error_model;
  params.q_mode = scenario.q_mode;
  curve.has_mc = true;
  curve.mc.resize(curve.snr_grid_db.size());
  curve.ci_low.resize(curve.snr_grid_db.size());
  curve.ci_high.resize(curve.snr_grid_db.size());
  for (size_t i = 0; i < curve.snr_grid_db.size(); ++i) {
    const double gamma_bar = std::pow(10.0, curve.snr_grid_db[i] / 10.0);
    const fso::BerEstimate est = fso::simulate_multihop(scenario, gamma_bar, params);
    curve.mc[i] = est.estimate;
    curve.ci_low[i] = est.ci_low;
    curve.ci_high[i] = est.ci_high;
  }
}

void report_crossing(const fso::BerCurve& curve, double target_ber) {
  try {
    const double snr = fso::crossing_snr_db(curve, target_ber);
    std::printf("crossing_snr_db=%.4f\n", snr);
  } catch (const fso::target_unreachable_error&) {
    std::printf("crossing_snr_db=none\n");
  }
}

int cmd_run(const std::string& config_path, const std::string& preset,
            const std::string& output, const Overrides& overrides) {
  fso::LinkScenario scenario = load_scenario(config_path, preset);
  const std::vector<std::string> applied = overrides.apply(scenario);
  scenario.validate();
  fso::BerCurve curve = fso::ber_curve(scenario, scenario.snr_grid());
  attach_mc(curve, scenario);
  fso::write_file_atomic(output, fso::render_curve_csv(curve, scenario, applied));
  report_crossing(curve, scenario.target_ber);
  return kExitOk;
}

int cmd_compare(const std::string& config_a, const std::string& preset_a,
                const std::string& config_b, const std::string& preset_b,
                std::optional<double> target) {
  fso::LinkScenario a = load_scenario(config_a, preset_a);
  fso::LinkScenario b = load_scenario(config_b, preset_b);
  const double target_ber = target.value_or(a.target_ber);
  // Crossings are a property of the analytic curve, not of the presentation
  // sweep, so compare always evaluates on one wide fine grid.
  const fso::SnrSweep wide{-40.0, 100.0, 0.25};
  a.snr = wide;
  b.snr = wide;
  const fso::BerCurve curve_a = fso::ber_curve(a, a.snr_grid());
  const fso::BerCurve curve_b = fso::ber_curve(b, b.snr_grid());
  const double cross_a = fso::crossing_snr_db(curve_a, target_ber);
  const double cross_b = fso::crossing_snr_db(curve_b, target_ber);
  std::printf("scenario_a=%s crossing_snr_db=%.4f\n", a.name.c_str(), cross_a);
  std::printf("scenario_b=%s crossing_snr_db=%.4f\n", b.name.c_str(), cross_b);
  std::printf("gain_db=%.4f\n", cross_b - cross_a);
  return kExitOk;
}

int cmd_reproduce(const std::string& figure, const std::string& output_dir) {
  std::string prefix;
  fso::SnrSweep sweep;
  sweep.step = 0.25;
  if (figure == "fig_clear") {
    prefix = "clear_";
    sweep.start = 0.0;
    sweep.stop = 80.0;
  } else if (figure == "fig_fog") {
    prefix = "fog_";
    // Fog multi-hop QAM crossings sit below 0 dB; extend the axis downward.
    sweep.start = -30.0;
    sweep.stop = 80.0;
  } else {
    throw fso::scenario_validation_error("figure must be fig_clear or fig_fog");
  }

  const std::vector<std::string> kinds = {
      "8qam_multihop_miso", "8qam_multihop_siso", "8pam_multihop_miso",
      "8pam_multihop_siso", "ook_miso_rc",        "ook_siso",
  };
  const double target_ber = 1e-9;
  std::vector<double> crossings;
  std::ostringstream summary;
  summary << "quantity,value_db\n";
  for (const auto& kind : kinds) {
    fso::LinkScenario scenario = fso::preset_scenario(prefix + kind);
    scenario.snr = sweep;
    scenario.target_ber = target_ber;
    const fso::BerCurve curve = fso::ber_curve(scenario, scenario.snr_grid());
    const std::filesystem::path path =
        std::filesystem::path(output_dir) / (scenario.name + ".csv");
    fso::write_file_atomic(path.string(),
                           fso::render_curve_csv(curve, scenario, {}));
    const double crossing = fso::crossing_snr_db(curve, target_ber);
    crossings.push_back(crossing);
    summary << "crossing_" << scenario.name << ","
            << fso::format_csv_value(crossing) << "\n";
    std::printf("%s crossing_snr_db=%.4f\n", scenario.name.c_str(), crossing);
  }

  const double qam_miso = crossings[0], qam_siso = crossings[1];
  const double pam_miso = crossings[2], pam_siso = crossings[3];
  const double ook_miso = crossings[4], ook_siso = crossings[5];
  const std::vector<std::pair<std::string, double>> gains = {
      {"gain_qam_over_pam_multihop_miso", pam_miso - qam_miso},
      {"gain_qam_over_pam_multihop_siso", pam_siso - qam_siso},
      {"gain_miso_over_siso_8qam", qam_siso - qam_miso},
      {"gain_miso_over_siso_8pam", pam_siso - pam_miso},
      {"gain_8qam_multihop_miso_over_ook_miso_rc", ook_miso - qam_miso},
      {"gain_8qam_multihop_siso_over_ook_siso", ook_siso - qam_siso},
  };
  for (const auto& [name, value] : gains) {
    summary << name << "," << fso::format_csv_value(value) << "\n";
    std::printf("%s=%.4f\n", name.c_str(), value);
  }
  const std::filesystem::path summary_path =
      std::filesystem::path(output_dir) / "gains_summary.csv";
  fso::write_file_atomic(summary_path.string(), summary.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"FSO LinkLab: BER analysis and simulation for free-space optical links"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run one scenario and write a CSV sweep");
  std::string run_config, run_preset, run_output;
  run->add_option("--config", run_config, "scenario config (JSON)");
  run->add_option("--preset", run_preset, "built-in scenario preset");
  run->add_option("--output", run_output, "output CSV path")->required();
  Overrides run_overrides;
  run_overrides.attach(run);

  auto* compare = app.add_subcommand("compare", "SNR gain between two scenarios");
  std::string cfg_a, preset_a, cfg_b, preset_b;
  std::optional<double> compare_target;
  compare->add_option("--config-a", cfg_a, "scenario A config");
  compare->add_option("--preset-a", preset_a, "scenario A preset");
  compare->add_option("--config-b", cfg_b, "scenario B config");
  compare->add_option("--preset-b", preset_b, "scenario B preset");
  compare->add_option("--target-ber", compare_target, "target BER");

  auto* reproduce = app.add_subcommand("reproduce", "emit a figure's curve bundle");
  std::string figure, output_dir = ".";
  reproduce->add_option("figure", figure, "fig_clear or fig_fog")->required();
  reproduce->add_option("--output-dir", output_dir, "directory for the CSV bundle");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (run->parsed()) return cmd_run(run_config, run_preset, run_output, run_overrides);
    if (compare->parsed()) {
      return cmd_compare(cfg_a, preset_a, cfg_b, preset_b, compare_target);
    }
    if (reproduce->parsed()) return cmd_reproduce(figure, output_dir);
  } catch (const fso::target_unreachable_error& e) {
    std::cerr << "target unreachable: " << e.what() << "\n";
    return kExitTargetUnreachable;
  } catch (const fso::scenario_validation_error& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const fso::invalid_matrix_error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const fso::complexity_limit_error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const fso::integration_failure_error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitOk;
}
