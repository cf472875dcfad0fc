// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 FSO LinkLab authors
#pragma once

#include <string>
#include <vector>

#include "fso/numerics.hpp"
#include "fso/random.hpp"

namespace fso {

struct LinkGeometry {
  double hop_length = 400.0;           // m
  double total_length = 1200.0;        // m
  double tx_aperture_diameter = 0.2;   // m
  double rx_aperture_diameter = 0.2;   // m
  double beam_divergence = 2e-3;       // rad
  double wavelength = 1550e-9;         // m
  void validate() const;               // throws std::invalid_argument
};

struct WeatherProfile {
  std::string name;
  double attenuation = 0.0;                 // dB/km
  double refractive_index_structure = 0.0;  // m^(-2/3)
};

// Built-in profiles: "clear" (0.43 dB/km, 5e-14) and "light_fog" (20 dB/km, 1.7e-14).
WeatherProfile weather_preset(const std::string& name);

struct ChannelStats {
  double sigma_x_sq = 0.0;  // log-amplitude variance
  double beta = 1.0;        // amplitude path loss normalized to the direct link
  int n_tx = 1;
  double correlation = 0.0;  // off-diagonal of the exchangeable matrix, in [0,1)
  CovarianceFactor cov_factor;  // Gamma'^{1/2}
};

ChannelStats make_channel_stats(double sigma_x_sq, double beta, int n_tx, double rho);

struct FadeVector {
  std::vector<double> values;  // normalized intensities, all > 0
};

// Far-field spreading loss (D_R / (D_T + theta*d))^2 as a power fraction.
double geometric_path_gain(const LinkGeometry& geometry, double distance);

// Weather attenuation 10^(-alpha * d_km / 10) as a power fraction.
double atmospheric_gain(double alpha_db_per_km, double distance_m);

// Per-hop amplitude path loss over the direct source-destination link, for K
// equidistant hops; enters the SNR as beta^2. K=1 gives exactly 1.
double normalized_beta(const LinkGeometry& geometry, const WeatherProfile& weather,
                       int hop_count);

// sigma_x = sqrt(ln(SI + 1)) / 2.
double sigma_from_si(double si);

enum class RytovModel { plane, spherical };

struct SigmaResult {
  double sigma_x_sq = 0.0;
  bool capped = false;  // true when the log-normal validity cap was applied
};

// Rytov log-amplitude variance c * k^{7/6} * Cn^2 * d^{11/6} with
// c = 0.30545 (plane) or 0.4 * 0.30545 (spherical), capped at sigma_x = 0.374.
SigmaResult sigma_from_cn2(const WeatherProfile& weather, const LinkGeometry& geometry,
                           double distance, RytovModel model = RytovModel::plane);

// Exchangeable matrix: unit diagonal, rho everywhere else. rho in [0, 1).
Eigen::MatrixXd correlation_matrix(int n_tx, double rho);

// I_i = e^{2 X_i}, X = sigma_x * (Gamma'^{1/2} z) - sigma_x^2 * 1, z ~ N(0, I).
FadeVector sample_fades(const ChannelStats& stats, RandomStream& stream);

}  // namespace fso
