// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 FSO LinkLab authors
#include "fso/modulation.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "fso/numerics.hpp"

namespace fso {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

int log2_int(int n) {
  int b = 0;
  while ((1 << b) < n) ++b;
  return b;
}

// Binary-reflected Gray code.
std::uint32_t gray(std::uint32_t i) { return i ^ (i >> 1); }

void require_nonnegative_gamma(double gamma, const char* who) {
  if (std::isnan(gamma) || gamma < 0) {
    throw std::invalid_argument(std::string(who) + ": gamma must be >= 0");
  }
}

}  // namespace

ModulationScheme make_scheme(ModulationFamily family, int order) {
  if (!is_power_of_two(order)) {
    throw std::invalid_argument("ModulationScheme: order must be a power of two");
  }
  ModulationScheme scheme;
  scheme.family = family;
  scheme.order = order;
  switch (family) {
    case ModulationFamily::OOK:
      if (order != 2) throw std::invalid_argument("ModulationScheme: OOK requires order 2");
      scheme.bits_per_symbol = 1;
      break;
    case ModulationFamily::M_PAM:
      if (order < 2) throw std::invalid_argument("ModulationScheme: M-PAM requires order >= 2");
      scheme.bits_per_symbol = log2_int(order);
      break;
    case ModulationFamily::M_QAM:
      if (order < 4) throw std::invalid_argument("ModulationScheme: M-QAM requires order >= 4");
      scheme.bits_per_symbol = log2_int(order);
      break;
    case ModulationFamily::M2_QAM:
      if (order < 2) {
        throw std::invalid_argument("ModulationScheme: M2-QAM requires sqrt-order >= 2");
      }
      scheme.bits_per_symbol = 2 * log2_int(order);
      break;
  }
  return scheme;
}

double apply_q(double x, QMode mode) {
  return mode == QMode::exact ? q_exact(x) : q_approx(x);
}

double pam_symbol_error(double gamma, int m) {
  require_nonnegative_gamma(gamma, "pam_symbol_error");
  if (!is_power_of_two(m) || log2_int(m) % 2 != 0 || m < 4) {
    throw std::invalid_argument(
        "pam_symbol_error: order must be 2^k with even k (perfect-square QAM order)");
  }
  const double sqrt_m = std::sqrt(static_cast<double>(m));
  const double log2m = log2_int(m);
  return 2.0 * (1.0 - 1.0 / sqrt_m) * q_exact(std::sqrt(3.0 * log2m * gamma / (m - 1)));
}

SymbolErrorPair qam_symbol_error(double gamma, int m) {
  require_nonnegative_gamma(gamma, "qam_symbol_error");
  if (!is_power_of_two(m) || log2_int(m) % 2 != 0 || m < 4) {
    throw std::invalid_argument("qam_symbol_error: order must be 2^k with even k");
  }
  const double p_rail = pam_symbol_error(gamma, m);
  const double log2m = log2_int(m);
  SymbolErrorPair pair;
  pair.exact = 1.0 - (1.0 - p_rail) * (1.0 - p_rail);
  pair.upper_bound = 4.0 * q_exact(std::sqrt(3.0 * log2m * gamma / (m - 1)));
  return pair;
}

double conditional_bep_mqam(double gamma, int m, QMode q_mode) {
  require_nonnegative_gamma(gamma, "conditional_bep_mqam");
  if (!is_power_of_two(m) || m < 4) {
    throw std::invalid_argument("conditional_bep_mqam: order must be a power of two >= 4");
  }
  const double log2m = log2_int(m);
  const double prefactor = 2.0 * (1.0 - 1.0 / std::sqrt(static_cast<double>(m))) / log2m;
  return prefactor * apply_q(std::sqrt(3.0 * log2m * gamma / (2.0 * (m - 1))), q_mode);
}

double conditional_bep_m2qam(double gamma, int m, QMode q_mode) {
  require_nonnegative_gamma(gamma, "conditional_bep_m2qam");
  if (!is_power_of_two(m) || m < 2) {
    throw std::invalid_argument("conditional_bep_m2qam: sqrt-order must be a power of two >= 2");
  }
  const double log2m = log2_int(m);
  const double prefactor = 2.0 * (m - 1) / (m * log2m);
  return prefactor *
         apply_q(std::sqrt(log2m * gamma / (4.0 * (m - 1.0) * (m - 1.0))), q_mode);
}

double conditional_bep_mpam(double gamma, int m, QMode q_mode) {
  require_nonnegative_gamma(gamma, "conditional_bep_mpam");
  if (!is_power_of_two(m) || m < 2) {
    throw std::invalid_argument("conditional_bep_mpam: order must be a power of two >= 2");
  }
  const double log2m = log2_int(m);
  const double prefactor = 2.0 * (m - 1) / (m * log2m);
  return prefactor *
         apply_q(std::sqrt(log2m * gamma / (2.0 * (m - 1.0) * (m - 1.0))), q_mode);
}

double conditional_bep_ook(double effective_fade, double gamma_bar, QMode q_mode) {
  if (std::isnan(effective_fade) || effective_fade <= 0) {
    throw std::invalid_argument("conditional_bep_ook: fade must be > 0");
  }
  require_nonnegative_gamma(gamma_bar, "conditional_bep_ook");
  return apply_q(std::sqrt(gamma_bar) * effective_fade / 2.0, q_mode);
}

double m2qam_symbol_union_bound(int m, double optical_power, double bit_rate,
                                double noise_variance) {
  if (m < 2 || optical_power <= 0 || bit_rate <= 0 || noise_variance <= 0) {
    throw std::invalid_argument("m2qam_symbol_union_bound: all parameters must be positive");
  }
  const double symbol_rate = bit_rate / (2.0 * log2_int(m));
  const double arg = optical_power / (m - 1.0) *
                     std::sqrt(1.0 / (4.0 * symbol_rate * noise_variance));
  return (4.0 * m - 1.0) / m * q_exact(arg);
}

SnrPoint snr_from_physical(double signal_power, double noise_variance, double bit_rate) {
  if (signal_power < 0 || noise_variance <= 0 || bit_rate <= 0) {
    throw std::invalid_argument("snr_from_physical: invalid physical parameters");
  }
  SnrPoint point;
  point.signal_power = signal_power;
  point.noise_variance = noise_variance;
  point.bit_rate = bit_rate;
  point.gamma = 2.0 * signal_power * signal_power / (noise_variance * bit_rate);
  point.gamma_bar = point.gamma;
  return point;
}

namespace {

Constellation finalize(Constellation c) {
  double power = 0.0;
  for (const auto& p : c.points) power += p[0] + p[1];
  power /= static_cast<double>(c.points.size());
  c.avg_power = power;
  if (power > 0) {
    for (auto& p : c.points) {
      p[0] /= power;
      p[1] /= power;
    }
    c.avg_power = 1.0;
  }
  double dmin = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < c.points.size(); ++i) {
    for (size_t j = i + 1; j < c.points.size(); ++j) {
      const double dx = c.points[i][0] - c.points[j][0];
      const double dy = c.points[i][1] - c.points[j][1];
      dmin = std::min(dmin, std::hypot(dx, dy));
    }
  }
  c.d_min = dmin;
  return c;
}

}  // namespace

Constellation build_constellation(const ModulationScheme& scheme) {
  Constellation c;
  switch (scheme.family) {
    case ModulationFamily::OOK: {
      if (scheme.order != 2) throw std::invalid_argument("build_constellation: OOK order must be 2");
      c.dims = 1;
      c.points = {{0.0, 0.0}, {1.0, 0.0}};
      c.gray_map = {0u, 1u};
      break;
    }
    case ModulationFamily::M_PAM: {
      const int m = scheme.order;
      if (!is_power_of_two(m) || m < 2) {
        throw std::invalid_argument("build_constellation: unsupported PAM order");
      }
      c.dims = 1;
      c.points.resize(m);
      c.gray_map.resize(m);
      for (int i = 0; i < m; ++i) {
        c.points[i] = {static_cast<double>(i), 0.0};
        c.gray_map[i] = gray(static_cast<std::uint32_t>(i));
      }
      break;
    }
    case ModulationFamily::M_QAM: {
      // Rectangular 2^a x 2^b grid in the nonnegative quadrant, a >= b,
      // Gray-labeled independently per axis.
      const int m = scheme.order;
      if (!is_power_of_two(m) || m < 4) {
        throw std::invalid_argument("build_constellation: unsupported QAM order");
      }
      const int k = log2_int(m);
      const int bits_i = (k + 1) / 2;
      const int bits_q = k / 2;
      const int mi = 1 << bits_i;
      const int mq = 1 << bits_q;
      c.dims = 2;
      c.points.resize(m);
      c.gray_map.resize(m);
      for (int qy = 0; qy < mq; ++qy) {
        for (int ix = 0; ix < mi; ++ix) {
          const int idx = qy * mi + ix;
          c.points[idx] = {static_cast<double>(ix), static_cast<double>(qy)};
          c.gray_map[idx] = (gray(static_cast<std::uint32_t>(qy)) << bits_i) |
                            gray(static_cast<std::uint32_t>(ix));
        }
      }
      break;
    }
    case ModulationFamily::M2_QAM: {
      const int m = scheme.order;
      if (!is_power_of_two(m) || m < 2) {
        throw std::invalid_argument("build_constellation: unsupported M2-QAM sqrt-order");
      }
      const int bits = log2_int(m);
      c.dims = 2;
      c.points.resize(m * m);
      c.gray_map.resize(m * m);
      for (int qy = 0; qy < m; ++qy) {
        for (int ix = 0; ix < m; ++ix) {
          const int idx = qy * m + ix;
          c.points[idx] = {static_cast<double>(ix), static_cast<double>(qy)};
          c.gray_map[idx] = (gray(static_cast<std::uint32_t>(qy)) << bits) |
                            gray(static_cast<std::uint32_t>(ix));
        }
      }
      break;
    }
  }
  return finalize(std::move(c));
}

int ml_detect(const std::array<double, 2>& received, const Constellation& constellation,
              double channel_gain) {
  if (constellation.points.empty()) {
    throw std::invalid_argument("ml_detect: empty constellation");
  }
  if (channel_gain <= 0) {
    throw std::invalid_argument("ml_detect: channel gain must be > 0");
  }
  int best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < constellation.points.size(); ++i) {
    const double dx = received[0] - channel_gain * constellation.points[i][0];
    const double dy = received[1] - channel_gain * constellation.points[i][1];
    const double d = dx * dx + dy * dy;
    if (d < best_dist) {
      best_dist = d;
      best = static_cast<int>(i);
    }
  }
  return best;
}

int ml_detect(double received, const Constellation& constellation, double channel_gain) {
  return ml_detect({received, 0.0}, constellation, channel_gain);
}

}  // namespace fso
