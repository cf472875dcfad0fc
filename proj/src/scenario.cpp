// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 FSO LinkLab authors
#include "fso/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace fso {

using json = nlohmann::ordered_json;

const char* family_name(ModulationFamily family) {
  switch (family) {
    case ModulationFamily::OOK: return "ook";
    case ModulationFamily::M_PAM: return "m_pam";
    case ModulationFamily::M_QAM: return "m_qam";
    case ModulationFamily::M2_QAM: return "m2_qam";
  }
  return "?";
}

const char* sigma_mode_name(SigmaMode mode) {
  return mode == SigmaMode::from_si ? "from_si" : "from_cn2";
}

const char* q_mode_name(QMode mode) { return mode == QMode::exact ? "exact" : "approx"; }

const char* ook_axis_name(OokAxis axis) {
  return axis == OokAxis::peak_power ? "peak_power" : "average_power";
}

const char* rytov_model_name(RytovModel model) {
  return model == RytovModel::plane ? "plane" : "spherical";
}

const char* error_model_name(ErrorModel model) {
  return model == ErrorModel::conditional ? "conditional" : "waveform";
}

namespace {

ModulationFamily family_from_name(const std::string& name) {
  if (name == "ook") return ModulationFamily::OOK;
  if (name == "m_pam") return ModulationFamily::M_PAM;
  if (name == "m_qam") return ModulationFamily::M_QAM;
  if (name == "m2_qam") return ModulationFamily::M2_QAM;
  throw scenario_validation_error("scheme.family: unknown value '" + name + "'");
}

int constellation_size(const ModulationScheme& scheme) {
  return scheme.family == ModulationFamily::M2_QAM ? scheme.order * scheme.order
                                                   : scheme.order;
}

void reject_unknown(const json& obj, const std::set<std::string>& known,
                    const std::string& where) {
  for (const auto& item : obj.items()) {
    if (!known.count(item.key())) {
      throw scenario_validation_error("unknown field '" + where + item.key() + "'");
    }
  }
}

}  // namespace

void LinkScenario::validate() const {
  geometry.validate();
  if (hops < 1) throw scenario_validation_error("hops: must be >= 1");
  if (n_tx < 1) throw scenario_validation_error("n_tx: must be >= 1");
  if (std::isnan(rho) || rho < 0.0 || rho >= 1.0) {
    throw scenario_validation_error("rho: must lie in [0, 1)");
  }
  const double expected_hop = geometry.total_length / hops;
  if (std::abs(geometry.hop_length - expected_hop) > 1e-6 * expected_hop) {
    throw scenario_validation_error(
        "geometry.hop_length: must equal total_length / hops");
  }
  if (parity_rule && constellation_size(scheme) != (1 << hops)) {
    throw scenario_validation_error(
        "scheme.order: parity rule requires a 2^K-point constellation for K hops");
  }
  if (quadrature_order < 1 || quadrature_order > 128) {
    throw scenario_validation_error("quadrature_order: must lie in [1, 128]");
  }
  if (!(snr.step > 0)) throw scenario_validation_error("snr.step: must be > 0");
  if (snr.stop < snr.start) throw scenario_validation_error("snr.stop: below snr.start");
  if (!(target_ber > 0.0 && target_ber < 0.5)) {
    throw scenario_validation_error("target_ber: must lie in (0, 0.5)");
  }
  if (si < 0) throw scenario_validation_error("si: must be >= 0");
  if (mc_enabled) {
    if (mc.trials != 0 && mc.trials < 1'000'000) {
      throw scenario_validation_error("mc.trials: must be 0 (auto) or >= 1e6");
    }
    if (mc.partitions < 1) throw scenario_validation_error("mc.partitions: must be >= 1");
  }
}

SigmaResult LinkScenario::sigma_result() const {
  if (sigma_mode == SigmaMode::from_si) {
    const double sigma = sigma_from_si(si);
    return SigmaResult{sigma * sigma, false};
  }
  const double hop_distance = geometry.total_length / hops;
  return sigma_from_cn2(weather, geometry, hop_distance, rytov_model);
}

ChannelStats LinkScenario::hop_stats() const {
  const double beta = normalized_beta(geometry, weather, hops);
  return make_channel_stats(sigma_result().sigma_x_sq, beta, n_tx, rho);
}

double LinkScenario::gamma_axis_scale() const {
  return scheme.family == ModulationFamily::OOK && ook_axis == OokAxis::average_power
             ? 4.0
             : 1.0;
}

std::vector<double> LinkScenario::snr_grid() const {
  std::vector<double> grid;
  const long long count =
      static_cast<long long>(std::floor((snr.stop - snr.start) / snr.step + 1e-9)) + 1;
  grid.reserve(static_cast<size_t>(std::max(1LL, count)));
  for (long long i = 0; i < count; ++i) grid.push_back(snr.start + i * snr.step);
  return grid;
}

LinkScenario default_scenario() {
  LinkScenario s;
  s.name = "clear_8qam_multihop_miso";
  s.geometry.hop_length = 400.0;
  return s;
}

std::vector<std::string> preset_names() {
  return {
      "clear_8qam_multihop_miso", "clear_8qam_multihop_siso",
      "clear_8pam_multihop_miso", "clear_8pam_multihop_siso",
      "clear_ook_miso_rc",        "clear_ook_siso",
      "fog_8qam_multihop_miso",   "fog_8qam_multihop_siso",
      "fog_8pam_multihop_miso",   "fog_8pam_multihop_siso",
      "fog_ook_miso_rc",          "fog_ook_siso",
  };
}

LinkScenario preset_scenario(const std::string& name) {
  LinkScenario s = default_scenario();
  s.name = name;

  std::string rest = name;
  if (rest.rfind("clear_", 0) == 0) {
    s.weather = weather_preset("clear");
    rest = rest.substr(6);
  } else if (rest.rfind("fog_", 0) == 0) {
    s.weather = weather_preset("light_fog");
    rest = rest.substr(4);
  } else {
    throw std::invalid_argument("preset_scenario: unknown preset '" + name + "'");
  }

  if (rest == "8qam_multihop_miso" || rest == "8qam_multihop_siso" ||
      rest == "8pam_multihop_miso" || rest == "8pam_multihop_siso") {
    s.hops = 3;
    s.geometry.hop_length = s.geometry.total_length / s.hops;
    s.scheme = make_scheme(rest.rfind("8qam", 0) == 0 ? ModulationFamily::M_QAM
                                                      : ModulationFamily::M_PAM,
                           8);
    s.n_tx = rest.find("_miso") != std::string::npos ? 3 : 1;
    s.sigma_mode = SigmaMode::from_cn2;
    s.q_mode = QMode::approx;
  } else if (rest == "ook_miso_rc" || rest == "ook_siso") {
    // Direct-link OOK baselines: single hop, SI-derived variance, exact Q.
    s.hops = 1;
    s.geometry.hop_length = s.geometry.total_length;
    s.scheme = make_scheme(ModulationFamily::OOK, 2);
    s.n_tx = rest == "ook_miso_rc" ? 3 : 1;
    s.sigma_mode = SigmaMode::from_si;
    s.q_mode = QMode::exact;
  } else {
    throw std::invalid_argument("preset_scenario: unknown preset '" + name + "'");
  }
  s.rho = s.n_tx > 1 ? 0.3 : 0.0;
  return s;
}

namespace {

double get_number(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) {
    throw scenario_validation_error(std::string(key) + ": expected a number");
  }
  return obj[key].get<double>();
}

std::string get_string(const json& obj, const char* key, const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_string()) {
    throw scenario_validation_error(std::string(key) + ": expected a string");
  }
  return obj[key].get<std::string>();
}

}  // namespace

LinkScenario parse_scenario_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("config parse error: ") + e.what());
  }
  if (!doc.is_object()) throw std::runtime_error("config parse error: not a JSON object");

  reject_unknown(doc,
                 {"name", "weather", "geometry", "hops", "relays", "n_tx", "rho",
                  "scheme", "sigma_mode", "rytov_model", "q_mode", "ook_axis",
                  "error_model", "parity_rule", "quadrature_order", "snr",
                  "target_ber", "si", "mc"},
                 "");

  LinkScenario s = default_scenario();
  s.name = get_string(doc, "name", "custom");

  if (doc.contains("weather")) {
    const auto& w = doc["weather"];
    if (w.is_string()) {
      s.weather = weather_preset(w.get<std::string>());
    } else if (w.is_object()) {
      reject_unknown(w, {"name", "attenuation", "refractive_index_structure"},
                     "weather.");
      s.weather.name = get_string(w, "name", "custom");
      s.weather.attenuation = get_number(w, "attenuation", 0.0);
      s.weather.refractive_index_structure =
          get_number(w, "refractive_index_structure", 0.0);
      if (s.weather.attenuation < 0 || s.weather.refractive_index_structure <= 0) {
        throw scenario_validation_error("weather: attenuation must be >= 0 and Cn2 > 0");
      }
    } else {
      throw scenario_validation_error("weather: expected preset name or object");
    }
  }

  bool hop_length_given = false;
  if (doc.contains("geometry")) {
    const auto& g = doc["geometry"];
    if (!g.is_object()) throw scenario_validation_error("geometry: expected an object");
    reject_unknown(g,
                   {"hop_length", "total_length", "tx_aperture_diameter",
                    "rx_aperture_diameter", "beam_divergence", "wavelength"},
                   "geometry.");
    hop_length_given = g.contains("hop_length");
    s.geometry.total_length = get_number(g, "total_length", s.geometry.total_length);
    s.geometry.hop_length = get_number(g, "hop_length", s.geometry.hop_length);
    s.geometry.tx_aperture_diameter =
        get_number(g, "tx_aperture_diameter", s.geometry.tx_aperture_diameter);
    s.geometry.rx_aperture_diameter =
        get_number(g, "rx_aperture_diameter", s.geometry.rx_aperture_diameter);
    s.geometry.beam_divergence =
        get_number(g, "beam_divergence", s.geometry.beam_divergence);
    s.geometry.wavelength = get_number(g, "wavelength", s.geometry.wavelength);
  }

  s.hops = static_cast<int>(get_number(doc, "hops", s.hops));
  if (!hop_length_given && s.hops >= 1) {
    s.geometry.hop_length = s.geometry.total_length / s.hops;
  }
  if (doc.contains("relays")) {
    const int relays = static_cast<int>(get_number(doc, "relays", 0));
    if (relays != s.hops - 1) {
      throw scenario_validation_error("relays: must equal hops - 1");
    }
  }
  s.n_tx = static_cast<int>(get_number(doc, "n_tx", s.n_tx));
  s.rho = get_number(doc, "rho", s.rho);

  if (doc.contains("scheme")) {
    const auto& m = doc["scheme"];
    if (!m.is_object()) throw scenario_validation_error("scheme: expected an object");
    reject_unknown(m, {"family", "order"}, "scheme.");
    const std::string fam = get_string(m, "family", family_name(s.scheme.family));
    const int order = static_cast<int>(get_number(m, "order", s.scheme.order));
    try {
      s.scheme = make_scheme(family_from_name(fam), order);
    } catch (const std::invalid_argument& e) {
      throw scenario_validation_error(e.what());
    }
  }

  const std::string sigma_mode = get_string(doc, "sigma_mode", sigma_mode_name(s.sigma_mode));
  if (sigma_mode == "from_si") {
    s.sigma_mode = SigmaMode::from_si;
  } else if (sigma_mode == "from_cn2") {
    s.sigma_mode = SigmaMode::from_cn2;
  } else {
    throw scenario_validation_error("sigma_mode: unknown value '" + sigma_mode + "'");
  }

  const std::string rytov = get_string(doc, "rytov_model", rytov_model_name(s.rytov_model));
  if (rytov == "plane") {
    s.rytov_model = RytovModel::plane;
  } else if (rytov == "spherical") {
    s.rytov_model = RytovModel::spherical;
  } else {
    throw scenario_validation_error("rytov_model: unknown value '" + rytov + "'");
  }

  const std::string qm = get_string(doc, "q_mode", q_mode_name(s.q_mode));
  if (qm == "exact") {
    s.q_mode = QMode::exact;
  } else if (qm == "approx") {
    s.q_mode = QMode::approx;
  } else {
    throw scenario_validation_error("q_mode: unknown value '" + qm + "'");
  }

  const std::string axis = get_string(doc, "ook_axis", ook_axis_name(s.ook_axis));
  if (axis == "peak_power") {
    s.ook_axis = OokAxis::peak_power;
  } else if (axis == "average_power") {
    s.ook_axis = OokAxis::average_power;
  } else {
    throw scenario_validation_error("ook_axis: unknown value '" + axis + "'");
  }

  const std::string em = get_string(doc, "error_model", error_model_name(s.error_model));
  if (em == "conditional") {
    s.error_model = ErrorModel::conditional;
  } else if (em == "waveform") {
    s.error_model = ErrorModel::waveform;
  } else {
    throw scenario_validation_error("error_model: unknown value '" + em + "'");
  }

  if (doc.contains("parity_rule")) {
    if (!doc["parity_rule"].is_boolean()) {
      throw scenario_validation_error("parity_rule: expected a boolean");
    }
    s.parity_rule = doc["parity_rule"].get<bool>();
  }
  s.quadrature_order =
      static_cast<int>(get_number(doc, "quadrature_order", s.quadrature_order));

  if (doc.contains("snr")) {
    const auto& grid = doc["snr"];
    if (!grid.is_object()) throw scenario_validation_error("snr: expected an object");
    reject_unknown(grid, {"start", "stop", "step"}, "snr.");
    s.snr.start = get_number(grid, "start", s.snr.start);
    s.snr.stop = get_number(grid, "stop", s.snr.stop);
    s.snr.step = get_number(grid, "step", s.snr.step);
  }

  s.target_ber = get_number(doc, "target_ber", s.target_ber);
  s.si = get_number(doc, "si", s.si);

  if (doc.contains("mc")) {
    const auto& mc = doc["mc"];
    if (!mc.is_object()) throw scenario_validation_error("mc: expected an object");
    reject_unknown(mc,
                   {"trials", "seed", "partitions", "responsivity", "noise_variance",
                    "error_model"},
                   "mc.");
    s.mc_enabled = true;
    s.mc.trials = static_cast<std::uint64_t>(get_number(mc, "trials", 0));
    s.mc.seed = static_cast<std::uint64_t>(get_number(mc, "seed", 1));
    s.mc.partitions = static_cast<int>(get_number(mc, "partitions", 1));
    s.mc.responsivity = get_number(mc, "responsivity", 1.0);
    s.mc.noise_variance = get_number(mc, "noise_variance", 0.0);
    const std::string mc_em = get_string(mc, "error_model", error_model_name(s.error_model));
    if (mc_em == "conditional") {
      s.mc.error_model = ErrorModel::conditional;
    } else if (mc_em == "waveform") {
      s.mc.error_model = ErrorModel::waveform;
    } else {
      throw scenario_validation_error("mc.error_model: unknown value '" + mc_em + "'");
    }
  }

  s.validate();
  return s;
}

LinkScenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario_json(buffer.str());
}

std::string serialize_scenario(const LinkScenario& s) {
  json doc;
  doc["name"] = s.name;
  doc["weather"] = {{"name", s.weather.name},
                    {"attenuation", s.weather.attenuation},
                    {"refractive_index_structure", s.weather.refractive_index_structure}};
  doc["geometry"] = {{"hop_length", s.geometry.hop_length},
                     {"total_length", s.geometry.total_length},
                     {"tx_aperture_diameter", s.geometry.tx_aperture_diameter},
                     {"rx_aperture_diameter", s.geometry.rx_aperture_diameter},
                     {"beam_divergence", s.geometry.beam_divergence},
                     {"wavelength", s.geometry.wavelength}};
  doc["hops"] = s.hops;
  doc["relays"] = s.relays();
  doc["n_tx"] = s.n_tx;
  doc["rho"] = s.rho;
  doc["scheme"] = {{"family", family_name(s.scheme.family)}, {"order", s.scheme.order}};
  doc["sigma_mode"] = sigma_mode_name(s.sigma_mode);
  doc["rytov_model"] = rytov_model_name(s.rytov_model);
  doc["q_mode"] = q_mode_name(s.q_mode);
  doc["ook_axis"] = ook_axis_name(s.ook_axis);
  doc["error_model"] = error_model_name(s.error_model);
  doc["parity_rule"] = s.parity_rule;
  doc["quadrature_order"] = s.quadrature_order;
  doc["snr"] = {{"start", s.snr.start}, {"stop", s.snr.stop}, {"step", s.snr.step}};
  doc["target_ber"] = s.target_ber;
  doc["si"] = s.si;
  if (s.mc_enabled) {
    doc["mc"] = {{"trials", s.mc.trials},
                 {"seed", s.mc.seed},
                 {"partitions", s.mc.partitions},
                 {"responsivity", s.mc.responsivity},
                 {"noise_variance", s.mc.noise_variance},
                 {"error_model", error_model_name(s.mc.error_model)}};
  }
  return doc.dump(2) + "\n";
}

}  // namespace fso
