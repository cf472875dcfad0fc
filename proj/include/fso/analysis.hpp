// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 FSO LinkLab authors
#pragma once

#include <string>
#include <vector>

#include "fso/channel.hpp"
#include "fso/modulation.hpp"
#include "fso/numerics.hpp"
#include "fso/scenario.hpp"

namespace fso {

struct HopBerModel {
  ModulationScheme scheme;
  ChannelStats stats;
  QuadratureRule quadrature;
};

// Validates the order/variance pairing (order >= 10 whenever sigma_x_sq > 0).
HopBerModel make_hop_model(const ModulationScheme& scheme, const ChannelStats& stats,
                           int quadrature_order);

// Per-hop average BER of M-QAM over the log-normal fade, as the two-term
// Gauss-Hermite sum with G = 2(1-1/sqrt(M))/(log2(M) sqrt(pi)) and SNR
// denominators 4(M-1), M-1. Requires family M_QAM and n_tx = 1.
double ber_hop_mqam(double gamma_bar, const HopBerModel& model);

// Same for M^2-QAM, G = 2(M-1)/(M log2(M) sqrt(pi)), denominators 8(M-1)^2
// and 6(M-1)^2. Requires family M2_QAM and n_tx = 1.
double ber_hop_m2qam(double gamma_bar, const HopBerModel& model);

// Repetition-coded MISO hop: N_t-fold nested Gauss-Hermite sum with
// correlated per-transmitter fades e^{sqrt(32 sigma^2) sum_j c'_ij x_j - 4 sigma^2},
// intensity-squared terms averaged over transmitters inside the SNR argument.
// family selects the M_QAM or M2_QAM conditional form.
double ber_hop_miso(double gamma_bar, const HopBerModel& model, ModulationFamily family);

// Generic per-hop engine used by curve generation: any family, either Q mode,
// SISO or MISO-RC. OOK averages the equal-gain amplitude mean; the other
// families average intensity-squared terms.
double ber_hop_generic(double gamma_bar, const HopBerModel& model, QMode q_mode);

// 1 - prod(1 - b_k), clamped to [0, 1].
double multihop_upper_bound(const std::vector<double>& hop_bers);

// (1 - (1 - 2b)^K) / 2 for identically distributed hops.
double multihop_average(double hop_ber, int k_hops);

struct BerCurve {
  std::vector<double> snr_grid_db;
  std::vector<double> analytic;
  std::vector<double> upper_bound;
  bool has_mc = false;
  std::vector<double> mc;
  std::vector<double> ci_low;
  std::vector<double> ci_high;
  std::string metadata;  // scenario name
};

// Analytic sweep: per-hop BER by scheme dispatch, then the average-form
// combiner (analytic field) and the union-form combiner (upper_bound field);
// K=1 bypasses both. Grid evaluation is parallel and order-independent.
BerCurve ber_curve(const LinkScenario& scenario, const std::vector<double>& snr_grid_db);

// SNR_b(target) - SNR_a(target), crossings located by interpolation linear in
// (SNR dB, log10 BER); positive means curve_a needs less SNR.
double snr_gain_at_target(const BerCurve& curve_a, const BerCurve& curve_b,
                          double target_ber);

// Crossing SNR of a curve's analytic field at the target level.
double crossing_snr_db(const BerCurve& curve, double target_ber);

}  // namespace fso
