// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 FSO LinkLab authors
#pragma once

#include <cstdint>
#include <utility>

#include "fso/channel.hpp"
#include "fso/modulation.hpp"
#include "fso/random.hpp"

namespace fso {

struct LinkScenario;

// conditional: draw fades, flip bits at the conditional bit-error probability
//   (validates the fading/diversity/relay chain against the closed forms).
// waveform: full constellation + AWGN + genie-CSI ML detection + Gray bit
//   counting (physical-layer reference model).
enum class ErrorModel { conditional, waveform };

struct SimulationParams {
  double responsivity = 1.0;     // eta
  double noise_variance = 0.0;   // per-dimension; <= 0 means calibrate from gamma_bar
  std::uint64_t trials = 1'000'000;  // bit count, >= 1e6
  std::uint64_t seed = 1;
  int partitions = 1;
  ErrorModel error_model = ErrorModel::conditional;
  QMode q_mode = QMode::approx;  // conditional-model Q flavor
};

struct BerEstimate {
  std::uint64_t errors = 0;
  std::uint64_t trials = 0;
  double estimate = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

// One hop: per symbol, draw a FadeVector and count Gray-mapped bit errors
// under the selected error model. gamma_bar is the direct-link average
// electrical SNR (linear); the hop sees beta^2 * fades on top of it.
BerEstimate simulate_hop(const ModulationScheme& scheme, const ChannelStats& stats,
                         double gamma_bar, const SimulationParams& params,
                         RandomStream& stream);

// Partition-parallel variant; deterministic in (seed, partitions), integer
// error counts reduced so the thread count never changes the result.
BerEstimate simulate_hop_partitioned(const ModulationScheme& scheme,
                                     const ChannelStats& stats, double gamma_bar,
                                     const SimulationParams& params);

// Full decode-and-forward cascade: source bits -> hop 1 detect -> re-encode
// -> ... -> destination; end-to-end errors counted against the source bits.
BerEstimate simulate_multihop(const LinkScenario& scenario, double gamma_bar,
                              const SimulationParams& params);

// Wilson score interval at the given confidence level.
std::pair<double, double> wilson_ci(std::uint64_t errors, std::uint64_t trials,
                                    double confidence);

// trials = max(1e6, 100 / target_ber), capped at the given budget.
std::uint64_t trials_schedule(double target_ber, std::uint64_t budget);

}  // namespace fso
