// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 FSO LinkLab authors
#include "fso/csv_report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fso {

std::string format_csv_value(double value) {
  char buf[64];
  if (value == 0.0) return "0";
  const double mag = std::abs(value);
  if (mag < 1e-3) {
    std::snprintf(buf, sizeof(buf), "%.5e", value);
    return buf;
  }
  const int exponent = static_cast<int>(std::floor(std::log10(mag)));
  const int decimals = std::max(0, 5 - exponent);
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
  return buf;
}

std::string render_curve_csv(const BerCurve& curve, const LinkScenario& scenario,
                             const std::vector<std::string>& overridden_fields) {
  std::ostringstream out;
  const ChannelStats stats = scenario.hop_stats();
  const SigmaResult sigma = scenario.sigma_result();

  out << "# fso-linklab curve export\n";
  out << "# snr_axis=average_electrical_snr_db\n";
  out << "# scenario=" << scenario.name << "\n";
  out << "# weather=" << scenario.weather.name << "\n";
  out << "# attenuation_db_per_km=" << scenario.weather.attenuation << "\n";
  out << "# refractive_index_structure=" << scenario.weather.refractive_index_structure
      << "\n";
  out << "# hop_length_m=" << scenario.geometry.hop_length << "\n";
  out << "# total_length_m=" << scenario.geometry.total_length << "\n";
  out << "# hops=" << scenario.hops << "\n";
  out << "# relays=" << scenario.relays() << "\n";
  out << "# n_tx=" << scenario.n_tx << "\n";
  out << "# rho=" << scenario.rho << "\n";
  out << "# scheme=" << family_name(scenario.scheme.family) << "\n";
  out << "# order=" << scenario.scheme.order << "\n";
  out << "# sigma_mode=" << sigma_mode_name(scenario.sigma_mode) << "\n";
  out << "# rytov_model=" << rytov_model_name(scenario.rytov_model) << "\n";
  out << "# q_mode=" << q_mode_name(scenario.q_mode) << "\n";
  out << "# ook_axis=" << ook_axis_name(scenario.ook_axis) << "\n";
  out << "# error_model=" << error_model_name(scenario.error_model) << "\n";
  out << "# parity_rule=" << (scenario.parity_rule ? "true" : "false") << "\n";
  out << "# quadrature_order=" << scenario.quadrature_order << "\n";
  out << "# snr_start=" << scenario.snr.start << "\n";
  out << "# snr_stop=" << scenario.snr.stop << "\n";
  out << "# snr_step=" << scenario.snr.step << "\n";
  out << "# target_ber=" << scenario.target_ber << "\n";
  out << "# si=" << scenario.si << "\n";
  out << "# sigma_x=" << std::sqrt(sigma.sigma_x_sq) << "\n";
  out << "# sigma_capped=" << (sigma.capped ? "true" : "false") << "\n";
  out << "# beta=" << stats.beta << "\n";
  out << "# mc_enabled=" << (scenario.mc_enabled ? "true" : "false") << "\n";
  if (scenario.mc_enabled) {
    out << "# mc_trials=" << scenario.mc.trials << "\n";
    out << "# mc_seed=" << scenario.mc.seed << "\n";
    out << "# mc_partitions=" << scenario.mc.partitions << "\n";
  }
  if (overridden_fields.empty()) {
    out << "# overrides=none\n";
  } else {
    out << "# overrides=";
    for (size_t i = 0; i < overridden_fields.size(); ++i) {
      if (i) out << ",";
      out << overridden_fields[i];
    }
    out << "\n";
  }

  out << kCsvHeader << "\n";
  for (size_t i = 0; i < curve.snr_grid_db.size(); ++i) {
    out << format_csv_value(curve.snr_grid_db[i]) << ","
        << format_csv_value(curve.analytic[i]) << ","
        << format_csv_value(curve.upper_bound[i]) << ",";
    if (curve.has_mc) {
      out << format_csv_value(curve.mc[i]) << "," << format_csv_value(curve.ci_low[i])
          << "," << format_csv_value(curve.ci_high[i]);
    } else {
      out << ",,";
    }
    out << "\n";
  }
  return out.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path temp = target.string() + ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open output file: " + temp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + temp.string());
  }
  fs::rename(temp, target);
}

}  // namespace fso
