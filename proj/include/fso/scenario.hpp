// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 FSO LinkLab authors
#pragma once

#include <string>
#include <vector>

#include "fso/channel.hpp"
#include "fso/modulation.hpp"
#include "fso/simulation.hpp"

namespace fso {

enum class SigmaMode { from_si, from_cn2 };

// How the OOK SNR axis is read: peak_power evaluates the conditional BEP at
// gamma_bar directly; average_power at 4*gamma_bar (peak = 2x average optical
// power for OOK, squared into the electrical SNR).
enum class OokAxis { peak_power, average_power };

struct SnrSweep {
  double start = 0.0;
  double stop = 80.0;
  double step = 1.0;
};

struct LinkScenario {
  std::string name = "custom";
  WeatherProfile weather = weather_preset("clear");
  LinkGeometry geometry;
  int hops = 3;
  int n_tx = 3;
  double rho = 0.3;
  ModulationScheme scheme = make_scheme(ModulationFamily::M_QAM, 8);
  SigmaMode sigma_mode = SigmaMode::from_cn2;
  RytovModel rytov_model = RytovModel::spherical;
  QMode q_mode = QMode::approx;
  OokAxis ook_axis = OokAxis::average_power;
  ErrorModel error_model = ErrorModel::conditional;
  bool parity_rule = true;
  int quadrature_order = 20;
  SnrSweep snr;
  double target_ber = 1e-9;
  double si = 0.75;  // scintillation index driving sigma_mode = from_si
  bool mc_enabled = false;
  SimulationParams mc;

  int relays() const { return hops - 1; }
  void validate() const;  // throws scenario_validation_error
  // Per-hop statistics: sigma via sigma_mode, beta via the path-loss ratio.
  ChannelStats hop_stats() const;
  // Effective sigma with the cap flag, for output metadata.
  SigmaResult sigma_result() const;
  // 4 for OOK on the average-power axis, 1 otherwise.
  double gamma_axis_scale() const;
  std::vector<double> snr_grid() const;
};

// Baseline defaults (clear weather, K=3, N_t=3, 8-QAM).
LinkScenario default_scenario();

std::vector<std::string> preset_names();
LinkScenario preset_scenario(const std::string& name);

// Strict JSON: unknown fields at any level are errors.
LinkScenario parse_scenario_json(const std::string& text);
LinkScenario load_scenario_file(const std::string& path);
std::string serialize_scenario(const LinkScenario& scenario);

const char* family_name(ModulationFamily family);
const char* sigma_mode_name(SigmaMode mode);
const char* q_mode_name(QMode mode);
const char* ook_axis_name(OokAxis axis);
const char* rytov_model_name(RytovModel model);
const char* error_model_name(ErrorModel model);

}  // namespace fso
