// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 FSO LinkLab authors
#include "fso/channel.hpp"

#include <cmath>
#include <numbers>

namespace fso {

namespace {
constexpr double kSigmaCap = 0.374;  // log-normal validity limit on sigma_x
}

void LinkGeometry::validate() const {
  if (hop_length <= 0 || total_length <= 0 || tx_aperture_diameter <= 0 ||
      rx_aperture_diameter <= 0 || beam_divergence <= 0 || wavelength <= 0) {
    throw std::invalid_argument("LinkGeometry: all fields must be strictly positive");
  }
  if (hop_length > total_length) {
    throw std::invalid_argument("LinkGeometry: hop_length exceeds total_length");
  }
  const double ratio = total_length / hop_length;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio) {
    throw std::invalid_argument(
        "LinkGeometry: total_length must be an integer multiple of hop_length");
  }
}

WeatherProfile weather_preset(const std::string& name) {
  if (name == "clear") return {"clear", 0.43, 5e-14};
  if (name == "light_fog") return {"light_fog", 20.0, 1.7e-14};
  throw std::invalid_argument("weather_preset: unknown profile '" + name + "'");
}

ChannelStats make_channel_stats(double sigma_x_sq, double beta, int n_tx, double rho) {
  if (sigma_x_sq < 0) throw std::invalid_argument("ChannelStats: sigma_x_sq must be >= 0");
  if (beta <= 0) throw std::invalid_argument("ChannelStats: beta must be > 0");
  if (n_tx < 1) throw std::invalid_argument("ChannelStats: n_tx must be >= 1");
  ChannelStats stats;
  stats.sigma_x_sq = sigma_x_sq;
  stats.beta = beta;
  stats.n_tx = n_tx;
  stats.correlation = rho;
  stats.cov_factor = sym_matrix_sqrt(correlation_matrix(n_tx, rho));
  return stats;
}

double geometric_path_gain(const LinkGeometry& geometry, double distance) {
  if (distance <= 0) throw std::invalid_argument("geometric_path_gain: distance must be > 0");
  const double spread =
      geometry.tx_aperture_diameter + geometry.beam_divergence * distance;
  const double ratio = geometry.rx_aperture_diameter / spread;
  const double gain = ratio * ratio;
  return gain > 1.0 ? 1.0 : gain;
}

double atmospheric_gain(double alpha_db_per_km, double distance_m) {
  return std::pow(10.0, -alpha_db_per_km * (distance_m / 1000.0) / 10.0);
}

double normalized_beta(const LinkGeometry& geometry, const WeatherProfile& weather,
                       int hop_count) {
  if (hop_count < 1) throw std::invalid_argument("normalized_beta: hop_count must be >= 1");
  geometry.validate();
  const double hop_distance = geometry.total_length / hop_count;
  const auto power_loss = [&](double d) {
    return geometric_path_gain(geometry, d) * atmospheric_gain(weather.attenuation, d);
  };
  return std::sqrt(power_loss(hop_distance) / power_loss(geometry.total_length));
}

double sigma_from_si(double si) {
  if (std::isnan(si) || si < 0) {
    throw std::invalid_argument("sigma_from_si: scintillation index must be >= 0");
  }
  return 0.5 * std::sqrt(std::log1p(si));
}

SigmaResult sigma_from_cn2(const WeatherProfile& weather, const LinkGeometry& geometry,
                           double distance, RytovModel model) {
  if (distance <= 0) throw std::invalid_argument("sigma_from_cn2: distance must be > 0");
  const double coef = model == RytovModel::plane ? 0.30545 : 0.4 * 0.30545;
  const double k = 2.0 * std::numbers::pi / geometry.wavelength;
  double sigma_sq = coef * std::pow(k, 7.0 / 6.0) *
                    weather.refractive_index_structure * std::pow(distance, 11.0 / 6.0);
  SigmaResult result;
  if (sigma_sq > kSigmaCap * kSigmaCap) {
    sigma_sq = kSigmaCap * kSigmaCap;
    result.capped = true;
  }
  result.sigma_x_sq = sigma_sq;
  return result;
}

Eigen::MatrixXd correlation_matrix(int n_tx, double rho) {
  if (n_tx < 1) throw std::invalid_argument("correlation_matrix: n_tx must be >= 1");
  if (std::isnan(rho) || rho < 0.0 || rho >= 1.0) {
    throw std::invalid_argument("correlation_matrix: rho must lie in [0, 1)");
  }
  Eigen::MatrixXd gamma = Eigen::MatrixXd::Constant(n_tx, n_tx, rho);
  gamma.diagonal().setOnes();
  return gamma;
}

FadeVector sample_fades(const ChannelStats& stats, RandomStream& stream) {
  const int n = stats.n_tx;
  const double sigma = std::sqrt(stats.sigma_x_sq);
  Eigen::VectorXd z(n);
  for (int i = 0; i < n; ++i) z[i] = stream.normal();
  FadeVector fades;
  fades.values.resize(n);
  if (stats.sigma_x_sq == 0.0) {
    for (int i = 0; i < n; ++i) fades.values[i] = 1.0;
    return fades;
  }
  const Eigen::VectorXd correlated = stats.cov_factor.matrix * z;
  for (int i = 0; i < n; ++i) {
    const double x = sigma * correlated[i] - stats.sigma_x_sq;
    fades.values[i] = std::exp(2.0 * x);
  }
  return fades;
}

}  // namespace fso
