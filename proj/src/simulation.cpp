// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 FSO LinkLab authors
#include "fso/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

#include "fso/analysis.hpp"
#include "fso/scenario.hpp"

namespace fso {

int thread_budget() {
  int budget = static_cast<int>(std::thread::hardware_concurrency());
  if (budget < 1) budget = 1;
  if (const char* env = std::getenv("FSO_LINKLAB_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) budget = std::min(budget, cap);
  }
  return budget;
}

std::uint64_t trials_schedule(double target_ber, std::uint64_t budget) {
  if (!(target_ber > 0.0)) {
    throw std::invalid_argument("trials_schedule: target_ber must be > 0");
  }
  const double wanted = std::max(1e6, 100.0 / target_ber);
  const double capped = std::min(wanted, static_cast<double>(budget));
  return static_cast<std::uint64_t>(capped);
}

std::pair<double, double> wilson_ci(std::uint64_t errors, std::uint64_t trials,
                                    double confidence) {
  if (trials == 0) throw std::invalid_argument("wilson_ci: trials must be > 0");
  if (errors > trials) throw std::invalid_argument("wilson_ci: errors exceed trials");
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw std::invalid_argument("wilson_ci: confidence must be in (0, 1)");
  }
  // Invert the Gaussian tail for the two-sided quantile by bisection.
  const double tail = 0.5 * (1.0 - confidence);
  double lo = 0.0, hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (q_exact(mid) > tail) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double z = 0.5 * (lo + hi);
  const double n = static_cast<double>(trials);
  const double p_hat = static_cast<double>(errors) / n;
  const double z2n = z * z / n;
  const double denom = 1.0 + z2n;
  const double center = (p_hat + 0.5 * z2n) / denom;
  const double half =
      z * std::sqrt(p_hat * (1.0 - p_hat) / n + 0.25 * z2n / n) / denom;
  double low = center - half;
  double high = center + half;
  if (errors == 0) low = 0.0;
  if (errors == trials) high = 1.0;
  return {std::clamp(low, 0.0, 1.0), std::clamp(high, 0.0, 1.0)};
}

namespace {

struct HopContext {
  ModulationScheme scheme;
  ChannelStats stats;
  Constellation constellation;
  std::vector<int> pattern_to_symbol;  // inverse Gray map
  double gamma_bar = 0.0;              // axis-scaled, linear
  double eta = 1.0;
  double noise_sigma = 0.0;  // waveform model, per dimension
  ErrorModel error_model = ErrorModel::conditional;
  QMode q_mode = QMode::approx;
};

HopContext make_context(const ModulationScheme& scheme, const ChannelStats& stats,
                        double gamma_bar, const SimulationParams& params) {
  if (gamma_bar < 0) throw std::invalid_argument("simulate: gamma_bar must be >= 0");
  HopContext ctx;
  ctx.scheme = scheme;
  ctx.stats = stats;
  ctx.constellation = build_constellation(scheme);
  ctx.pattern_to_symbol.assign(ctx.constellation.points.size(), 0);
  for (size_t i = 0; i < ctx.constellation.gray_map.size(); ++i) {
    ctx.pattern_to_symbol[ctx.constellation.gray_map[i]] = static_cast<int>(i);
  }
  ctx.gamma_bar = gamma_bar;
  ctx.eta = params.responsivity;
  ctx.error_model = params.error_model;
  ctx.q_mode = params.q_mode;
  if (params.noise_variance > 0) {
    ctx.noise_sigma = std::sqrt(params.noise_variance);
  } else if (gamma_bar > 0) {
    // Calibrated so the genie-CSI ML error rate at I = 1, beta = 1 equals the
    // conditional BEP: sigma_n^2 = 4 eta^2 / gamma_bar for OOK (two-level,
    // one dimension), 2 eta^2 / (gamma_bar R) for the multilevel families.
    const double eta_sq = ctx.eta * ctx.eta;
    if (scheme.family == ModulationFamily::OOK) {
      ctx.noise_sigma = std::sqrt(4.0 * eta_sq / gamma_bar);
    } else {
      ctx.noise_sigma =
          std::sqrt(2.0 * eta_sq / (gamma_bar * scheme.bits_per_symbol));
    }
  }
  return ctx;
}

double conditional_bep_for(const HopContext& ctx, const FadeVector& fades) {
  const int n_tx = ctx.stats.n_tx;
  const double beta = ctx.stats.beta;
  if (ctx.scheme.family == ModulationFamily::OOK) {
    double mean = 0.0;
    for (double v : fades.values) mean += v;
    mean /= n_tx;
    return conditional_bep_ook(beta * mean, ctx.gamma_bar, ctx.q_mode);
  }
  double agg = 0.0;
  for (double v : fades.values) agg += v * v;
  agg /= n_tx;
  const double gamma = ctx.gamma_bar * beta * beta * agg;
  switch (ctx.scheme.family) {
    case ModulationFamily::M_PAM:
      return conditional_bep_mpam(gamma, ctx.scheme.order, ctx.q_mode);
    case ModulationFamily::M_QAM:
      return conditional_bep_mqam(gamma, ctx.scheme.order, ctx.q_mode);
    case ModulationFamily::M2_QAM:
      return conditional_bep_m2qam(gamma, ctx.scheme.order, ctx.q_mode);
    default:
      throw std::invalid_argument("simulate: unsupported family");
  }
}

// One waveform transmission of symbol index through the faded hop.
int waveform_transmit(const HopContext& ctx, int symbol, const FadeVector& fades,
                      RandomStream& stream) {
  double mean = 0.0;
  for (double v : fades.values) mean += v;
  mean /= ctx.stats.n_tx;
  const double gain = ctx.eta * ctx.stats.beta * mean;
  const auto& point = ctx.constellation.points[symbol];
  std::array<double, 2> received{gain * point[0], gain * point[1]};
  received[0] += ctx.noise_sigma * stream.normal();
  if (ctx.constellation.dims == 2) received[1] += ctx.noise_sigma * stream.normal();
  return ml_detect(received, ctx.constellation, gain);
}

// Runs `symbols` symbols through one hop, counting bit errors.
std::uint64_t run_hop_symbols(const HopContext& ctx, std::uint64_t symbols,
                              RandomStream& stream) {
  const int bits = ctx.scheme.bits_per_symbol;
  const std::uint64_t n_points = ctx.constellation.points.size();
  std::uint64_t errors = 0;
  for (std::uint64_t s = 0; s < symbols; ++s) {
    const FadeVector fades = sample_fades(ctx.stats, stream);
    if (ctx.error_model == ErrorModel::conditional) {
      const double bep = conditional_bep_for(ctx, fades);
      for (int b = 0; b < bits; ++b) {
        if (stream.uniform() < bep) ++errors;
      }
    } else {
      const int tx = static_cast<int>(stream.uniform_int(n_points));
      const int rx = waveform_transmit(ctx, tx, fades, stream);
      errors += std::popcount(ctx.constellation.gray_map[tx] ^
                              ctx.constellation.gray_map[rx]);
    }
  }
  return errors;
}

BerEstimate finalize_estimate(std::uint64_t errors, std::uint64_t trials) {
  BerEstimate est;
  est.errors = errors;
  est.trials = trials;
  est.estimate = trials ? static_cast<double>(errors) / static_cast<double>(trials) : 0.0;
  const auto ci = wilson_ci(errors, trials, 0.95);
  est.ci_low = ci.first;
  est.ci_high = ci.second;
  return est;
}

void check_params(const SimulationParams& params) {
  if (params.trials < 1'000'000) {
    throw std::invalid_argument("SimulationParams: trials must be >= 1e6");
  }
  if (params.partitions < 1) {
    throw std::invalid_argument("SimulationParams: partitions must be >= 1");
  }
  if (params.responsivity <= 0) {
    throw std::invalid_argument("SimulationParams: responsivity must be > 0");
  }
}

// Splits work across partitions and reduces integer error counts; the
// reduction is a sum, so scheduling order never affects the result.
template <typename PartitionFn>
BerEstimate run_partitioned(std::uint64_t total_symbols, int bits_per_symbol,
                            const SimulationParams& params, PartitionFn&& fn) {
  const int partitions = params.partitions;
  std::vector<std::uint64_t> errors(partitions, 0);
  std::vector<std::uint64_t> symbols(partitions, 0);
  const std::uint64_t base = total_symbols / partitions;
  const std::uint64_t extra = total_symbols % partitions;
  for (int p = 0; p < partitions; ++p) {
    symbols[p] = base + (static_cast<std::uint64_t>(p) < extra ? 1 : 0);
  }

  const int workers = std::max(1, std::min(thread_budget(), partitions));
  if (workers == 1) {
    for (int p = 0; p < partitions; ++p) errors[p] = fn(p, symbols[p]);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int p = next.fetch_add(1); p < partitions; p = next.fetch_add(1)) {
          errors[p] = fn(p, symbols[p]);
        }
      });
    }
    for (auto& t : pool) t.join();
  }
  std::uint64_t total_errors = 0;
  for (auto e : errors) total_errors += e;
  return finalize_estimate(total_errors,
                           total_symbols * static_cast<std::uint64_t>(bits_per_symbol));
}

}  // namespace

BerEstimate simulate_hop(const ModulationScheme& scheme, const ChannelStats& stats,
                         double gamma_bar, const SimulationParams& params,
                         RandomStream& stream) {
  check_params(params);
  const HopContext ctx = make_context(scheme, stats, gamma_bar, params);
  const int bits = scheme.bits_per_symbol;
  const std::uint64_t symbols = (params.trials + bits - 1) / bits;
  const std::uint64_t errors = run_hop_symbols(ctx, symbols, stream);
  return finalize_estimate(errors, symbols * static_cast<std::uint64_t>(bits));
}

BerEstimate simulate_hop_partitioned(const ModulationScheme& scheme,
                                     const ChannelStats& stats, double gamma_bar,
                                     const SimulationParams& params) {
  check_params(params);
  const HopContext ctx = make_context(scheme, stats, gamma_bar, params);
  const int bits = scheme.bits_per_symbol;
  const std::uint64_t symbols = (params.trials + bits - 1) / bits;
  return run_partitioned(symbols, bits, params,
                         [&](int partition, std::uint64_t count) -> std::uint64_t {
                           RandomStream stream = RandomStream::for_partition(
                               params.seed, static_cast<std::uint64_t>(partition));
                           return run_hop_symbols(ctx, count, stream);
                         });
}

BerEstimate simulate_multihop(const LinkScenario& scenario, double gamma_bar,
                              const SimulationParams& params) {
  check_params(params);
  scenario.validate();
  const ChannelStats stats = scenario.hop_stats();
  SimulationParams hop_params = params;
  hop_params.error_model = scenario.error_model;
  hop_params.q_mode = scenario.q_mode;
  const double gamma_eff = scenario.gamma_axis_scale() * gamma_bar;
  const HopContext ctx = make_context(scenario.scheme, stats, gamma_eff, hop_params);
  const int bits = scenario.scheme.bits_per_symbol;
  const int hops = scenario.hops;
  const std::uint64_t symbols = (params.trials + bits - 1) / bits;

  const auto run_partition = [&](int partition, std::uint64_t count) -> std::uint64_t {
    RandomStream stream =
        RandomStream::for_partition(params.seed, static_cast<std::uint64_t>(partition));
    std::uint64_t errors = 0;
    std::vector<int> bit_state(bits);
    for (std::uint64_t s = 0; s < count; ++s) {
      if (ctx.error_model == ErrorModel::conditional) {
        // Bit flips compose across hops; only the net flip matters.
        for (int b = 0; b < bits; ++b) bit_state[b] = 0;
        for (int k = 0; k < hops; ++k) {
          const FadeVector fades = sample_fades(ctx.stats, stream);
          const double bep = conditional_bep_for(ctx, fades);
          for (int b = 0; b < bits; ++b) {
            if (stream.uniform() < bep) bit_state[b] ^= 1;
          }
        }
        for (int b = 0; b < bits; ++b) errors += bit_state[b];
      } else {
        const int source =
            static_cast<int>(stream.uniform_int(ctx.constellation.points.size()));
        int current = source;
        for (int k = 0; k < hops; ++k) {
          const FadeVector fades = sample_fades(ctx.stats, stream);
          current = waveform_transmit(ctx, current, fades, stream);
        }
        errors += std::popcount(ctx.constellation.gray_map[source] ^
                                ctx.constellation.gray_map[current]);
      }
    }
    return errors;
  };

  return run_partitioned(symbols, bits, params, run_partition);
}

}  // namespace fso
