// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 FSO LinkLab authors
#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "fso/errors.hpp"

namespace fso {

enum class ModulationFamily { OOK, M_PAM, M_QAM, M2_QAM };

struct ModulationScheme {
  ModulationFamily family = ModulationFamily::OOK;
  int order = 2;            // for M2_QAM this is M; the constellation has M^2 points
  int bits_per_symbol = 1;  // log2 of the constellation size
};

// Validates the (family, order) combination and fills bits_per_symbol.
ModulationScheme make_scheme(ModulationFamily family, int order);

enum class QMode { exact, approx };

double apply_q(double x, QMode mode);

// Symbol error rate of the sqrt(M)-ary PAM rails inside an M-QAM symbol:
// 2(1 - 1/sqrt(M)) Q(sqrt(3 log2(M) gamma / (M - 1))). m is the QAM order.
double pam_symbol_error(double gamma, int m);

struct SymbolErrorPair {
  double exact = 0.0;        // 1 - (1 - P_sqrtM)^2
  double upper_bound = 0.0;  // 4 Q(sqrt(3 log2(M) gamma / (M-1)))
};

// Exact M-QAM symbol error rate plus its union-type upper bound.
SymbolErrorPair qam_symbol_error(double gamma, int m);

// (2(1-1/sqrt(M))/log2 M) Q(sqrt(3 log2(M) gamma / (2(M-1)))), m >= 4.
double conditional_bep_mqam(double gamma, int m, QMode q_mode);

// (2(M-1)/(M log2 M)) Q(sqrt(log2(M) gamma / (4(M-1)^2))). m is the
// square-root order M of an M^2-point constellation, m >= 2.
double conditional_bep_m2qam(double gamma, int m, QMode q_mode);

// (2(M-1)/(M log2 M)) Q(sqrt(log2(M) gamma / (2(M-1)^2))), m >= 2.
double conditional_bep_mpam(double gamma, int m, QMode q_mode);

// Q(sqrt(gamma_bar) * fade / 2); fade carries the path loss and the
// equal-gain average of the per-transmitter intensities.
double conditional_bep_ook(double effective_fade, double gamma_bar, QMode q_mode);

// Symbol-error union bound for M^2-QAM from physical parameters:
// ((4M-1)/M) Q((P/(M-1)) sqrt(1/(4 R_s sigma_sq))), R_s = R / log2(M^2).
double m2qam_symbol_union_bound(int m, double optical_power, double bit_rate,
                                double noise_variance);

// Instantaneous-SNR bookkeeping: gamma = 2 P^2 / (sigma_n^2 R).
struct SnrPoint {
  double gamma = 0.0;
  double gamma_bar = 0.0;
  double signal_power = 0.0;
  double noise_variance = 0.0;
  double bit_rate = 0.0;
};

SnrPoint snr_from_physical(double signal_power, double noise_variance, double bit_rate);

// Nonnegative intensity constellation with Gray labeling, unit mean optical
// power (power of a 2-D point = sum of its coordinates).
struct Constellation {
  int dims = 1;  // 1 for OOK/PAM, 2 for QAM families
  std::vector<std::array<double, 2>> points;
  std::vector<std::uint32_t> gray_map;  // symbol index -> bit pattern
  double avg_power = 1.0;
  double d_min = 0.0;
};

Constellation build_constellation(const ModulationScheme& scheme);

// Index of the gain-scaled constellation point nearest to the received
// coordinates; ties break toward the lower index.
int ml_detect(const std::array<double, 2>& received, const Constellation& constellation,
              double channel_gain);
int ml_detect(double received, const Constellation& constellation, double channel_gain);

}  // namespace fso
