// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 FSO LinkLab authors
#include "fso/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "fso/simulation.hpp"

namespace fso {

namespace {

constexpr double kSqrtPi = 1.7724538509055160273;
constexpr double kMaxNestedTerms = 1e7;

void check_siso_model(const HopBerModel& model, ModulationFamily family,
                      const char* who) {
  if (model.scheme.family != family) {
    throw std::invalid_argument(std::string(who) + ": wrong modulation family");
  }
  if (model.stats.n_tx != 1) {
    throw std::invalid_argument(std::string(who) + ": requires n_tx = 1");
  }
}

void check_complexity(const HopBerModel& model) {
  const double terms =
      std::pow(static_cast<double>(model.quadrature.order), model.stats.n_tx);
  if (terms > kMaxNestedTerms) {
    throw complexity_limit_error(
        "nested quadrature exceeds the term budget: order^n_tx = " +
        std::to_string(model.quadrature.order) + "^" +
        std::to_string(model.stats.n_tx));
  }
}

// Nested Gauss-Hermite expectation over N_t correlated fades. The callable
// receives the transmitter average of intensity-squared terms
// (amplitude_mean = false) or of the intensities themselves (true, the
// equal-gain combining convention used by OOK).
template <typename Bep>
double nested_expectation(const HopBerModel& model, bool amplitude_mean, Bep&& bep) {
  const int n_tx = model.stats.n_tx;
  const int order = model.quadrature.order;
  const double sigma_sq = model.stats.sigma_x_sq;
  const auto& nodes = model.quadrature.nodes;
  const auto& weights = model.quadrature.weights;

  if (n_tx == 1) {
    double acc = 0.0;
    if (amplitude_mean) {
      const double a = std::sqrt(8.0 * sigma_sq);
      for (int i = 0; i < order; ++i) {
        const double fade = std::exp(a * nodes[i] - 2.0 * sigma_sq);
        acc += weights[i] * bep(fade);
      }
    } else {
      const double a = std::sqrt(32.0 * sigma_sq);
      for (int i = 0; i < order; ++i) {
        const double fade_sq = std::exp(a * nodes[i] - 4.0 * sigma_sq);
        acc += weights[i] * bep(fade_sq);
      }
    }
    return acc / kSqrtPi;
  }

  check_complexity(model);
  const Eigen::MatrixXd& c = model.stats.cov_factor.matrix;
  const double a = std::sqrt(32.0 * sigma_sq);

  // col_contrib[j*n_tx + i] over node n: contribution of x_n at level j to L_i.
  std::vector<double> col_contrib(static_cast<size_t>(n_tx) * n_tx * order);
  for (int j = 0; j < n_tx; ++j) {
    for (int n = 0; n < order; ++n) {
      for (int i = 0; i < n_tx; ++i) {
        col_contrib[(static_cast<size_t>(j) * order + n) * n_tx + i] =
            a * c(i, j) * nodes[n];
      }
    }
  }

  std::vector<int> idx(n_tx, 0);
  std::vector<std::vector<double>> partial(n_tx + 1, std::vector<double>(n_tx, 0.0));
  std::vector<double> wpartial(n_tx + 1, 1.0);
  double acc = 0.0;
  int level = 0;
  while (true) {
    for (; level < n_tx; ++level) {
      const int n = idx[level];
      const double* col = &col_contrib[(static_cast<size_t>(level) * order + n) *
                                       static_cast<size_t>(n_tx)];
      for (int i = 0; i < n_tx; ++i) partial[level + 1][i] = partial[level][i] + col[i];
      wpartial[level + 1] = wpartial[level] * (weights[n] / kSqrtPi);
    }
    double agg = 0.0;
    if (amplitude_mean) {
      for (int i = 0; i < n_tx; ++i) {
        agg += std::exp(0.5 * (partial[n_tx][i] - 4.0 * sigma_sq));
      }
    } else {
      for (int i = 0; i < n_tx; ++i) {
        agg += std::exp(partial[n_tx][i] - 4.0 * sigma_sq);
      }
    }
    acc += wpartial[n_tx] * bep(agg / n_tx);

    level = n_tx - 1;
    while (level >= 0 && ++idx[level] == order) {
      idx[level] = 0;
      --level;
    }
    if (level < 0) break;
  }
  return acc;
}

}  // namespace

HopBerModel make_hop_model(const ModulationScheme& scheme, const ChannelStats& stats,
                           int quadrature_order) {
  if (stats.sigma_x_sq > 0 && quadrature_order < 10) {
    throw std::invalid_argument(
        "make_hop_model: quadrature order must be >= 10 when sigma_x_sq > 0");
  }
  return HopBerModel{scheme, stats, gauss_hermite(quadrature_order)};
}

double ber_hop_mqam(double gamma_bar, const HopBerModel& model) {
  check_siso_model(model, ModulationFamily::M_QAM, "ber_hop_mqam");
  const int m = model.scheme.order;
  const double log2m = model.scheme.bits_per_symbol;
  const double g = 2.0 * (1.0 - 1.0 / std::sqrt(static_cast<double>(m))) /
                   (log2m * kSqrtPi);
  const double sigma_sq = model.stats.sigma_x_sq;
  const double beta_sq = model.stats.beta * model.stats.beta;
  const double a = std::sqrt(32.0 * sigma_sq);
  const double c1 = 3.0 * log2m * beta_sq * gamma_bar / (4.0 * (m - 1));
  const double c2 = log2m * beta_sq * gamma_bar / (m - 1);
  double s1 = 0.0, s2 = 0.0;
  for (int i = 0; i < model.quadrature.order; ++i) {
    const double fade_sq = std::exp(-4.0 * sigma_sq + model.quadrature.nodes[i] * a);
    s1 += model.quadrature.weights[i] * std::exp(-c1 * fade_sq);
    s2 += model.quadrature.weights[i] * std::exp(-c2 * fade_sq);
  }
  return g / 12.0 * s1 + g / 4.0 * s2;
}

double ber_hop_m2qam(double gamma_bar, const HopBerModel& model) {
  check_siso_model(model, ModulationFamily::M2_QAM, "ber_hop_m2qam");
  const int m = model.scheme.order;
  const double log2m = 0.5 * model.scheme.bits_per_symbol;
  const double g = 2.0 * (m - 1) / (m * log2m * kSqrtPi);
  const double sigma_sq = model.stats.sigma_x_sq;
  const double beta_sq = model.stats.beta * model.stats.beta;
  const double a = std::sqrt(32.0 * sigma_sq);
  const double denom = (m - 1.0) * (m - 1.0);
  const double c1 = log2m * beta_sq * gamma_bar / (8.0 * denom);
  const double c2 = log2m * beta_sq * gamma_bar / (6.0 * denom);
  double s1 = 0.0, s2 = 0.0;
  for (int i = 0; i < model.quadrature.order; ++i) {
    const double fade_sq = std::exp(-4.0 * sigma_sq + model.quadrature.nodes[i] * a);
    s1 += model.quadrature.weights[i] * std::exp(-c1 * fade_sq);
    s2 += model.quadrature.weights[i] * std::exp(-c2 * fade_sq);
  }
  return g / 12.0 * s1 + g / 4.0 * s2;
}

double ber_hop_miso(double gamma_bar, const HopBerModel& model,
                    ModulationFamily family) {
  if (family != ModulationFamily::M_QAM && family != ModulationFamily::M2_QAM) {
    throw std::invalid_argument("ber_hop_miso: family must be M_QAM or M2_QAM");
  }
  if (model.scheme.family != family) {
    throw std::invalid_argument("ber_hop_miso: model/family mismatch");
  }
  const int m = model.scheme.order;
  const double beta_sq = model.stats.beta * model.stats.beta;
  if (family == ModulationFamily::M_QAM) {
    return nested_expectation(model, false, [&](double agg) {
      return conditional_bep_mqam(gamma_bar * beta_sq * agg, m, QMode::approx);
    });
  }
  return nested_expectation(model, false, [&](double agg) {
    return conditional_bep_m2qam(gamma_bar * beta_sq * agg, m, QMode::approx);
  });
}

double ber_hop_generic(double gamma_bar, const HopBerModel& model, QMode q_mode) {
  const int m = model.scheme.order;
  const double beta = model.stats.beta;
  const double beta_sq = beta * beta;
  switch (model.scheme.family) {
    case ModulationFamily::OOK:
      return nested_expectation(model, true, [&](double fade_mean) {
        return conditional_bep_ook(beta * fade_mean, gamma_bar, q_mode);
      });
    case ModulationFamily::M_PAM:
      return nested_expectation(model, false, [&](double agg) {
        return conditional_bep_mpam(gamma_bar * beta_sq * agg, m, q_mode);
      });
    case ModulationFamily::M_QAM:
      return nested_expectation(model, false, [&](double agg) {
        return conditional_bep_mqam(gamma_bar * beta_sq * agg, m, q_mode);
      });
    case ModulationFamily::M2_QAM:
      return nested_expectation(model, false, [&](double agg) {
        return conditional_bep_m2qam(gamma_bar * beta_sq * agg, m, q_mode);
      });
  }
  throw std::invalid_argument("ber_hop_generic: unknown family");
}

double multihop_upper_bound(const std::vector<double>& hop_bers) {
  // log1p/expm1 keep relative precision when the survival product hugs 1
  double log_survive = 0.0;
  for (double b : hop_bers) {
    if (std::isnan(b) || b < 0.0 || b > 1.0) {
      throw std::invalid_argument("multihop_upper_bound: hop BER outside [0, 1]");
    }
    log_survive += std::log1p(-b);
  }
  return std::clamp(-std::expm1(log_survive), 0.0, 1.0);
}

double multihop_average(double hop_ber, int k_hops) {
  if (std::isnan(hop_ber) || hop_ber < 0.0 || hop_ber > 0.5) {
    throw std::invalid_argument("multihop_average: hop BER outside [0, 0.5]");
  }
  if (k_hops < 1) throw std::invalid_argument("multihop_average: k_hops must be >= 1");
  if (k_hops == 1) return hop_ber;
  const double flip = k_hops * std::log1p(-2.0 * hop_ber);
  return std::clamp(-0.5 * std::expm1(flip), 0.0, 0.5);
}

BerCurve ber_curve(const LinkScenario& scenario, const std::vector<double>& snr_grid_db) {
  scenario.validate();
  const ChannelStats stats = scenario.hop_stats();
  const HopBerModel model =
      make_hop_model(scenario.scheme, stats, scenario.quadrature_order);
  const double axis_scale = scenario.gamma_axis_scale();
  const int hops = scenario.hops;
  const QMode q_mode = scenario.q_mode;

  BerCurve curve;
  curve.metadata = scenario.name;
  curve.snr_grid_db = snr_grid_db;
  curve.analytic.resize(snr_grid_db.size());
  curve.upper_bound.resize(snr_grid_db.size());

  const auto eval_point = [&](size_t i) {
    const double gamma_bar = axis_scale * std::pow(10.0, snr_grid_db[i] / 10.0);
    const double hop = ber_hop_generic(gamma_bar, model, q_mode);
    if (hops == 1) {
      curve.analytic[i] = hop;
      curve.upper_bound[i] = hop;
    } else {
      curve.analytic[i] = multihop_average(hop, hops);
      curve.upper_bound[i] =
          multihop_upper_bound(std::vector<double>(static_cast<size_t>(hops), hop));
    }
  };

  const int budget = thread_budget();
  const int workers =
      std::max(1, std::min<int>(budget, static_cast<int>(snr_grid_db.size())));
  if (workers == 1) {
    for (size_t i = 0; i < snr_grid_db.size(); ++i) eval_point(i);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (size_t i = next.fetch_add(1); i < snr_grid_db.size();
             i = next.fetch_add(1)) {
          eval_point(i);
        }
      });
    }
    for (auto& t : pool) t.join();
  }
  return curve;
}

double crossing_snr_db(const BerCurve& curve, double target_ber) {
  if (!(target_ber > 0.0) || curve.snr_grid_db.size() < 2) {
    throw std::invalid_argument("crossing_snr_db: bad target or degenerate grid");
  }
  const auto& grid = curve.snr_grid_db;
  const auto& ber = curve.analytic;
  if (ber.front() < target_ber) {
    throw target_unreachable_error("curve '" + curve.metadata +
                                   "' is already below the target at the grid start");
  }
  for (size_t i = 0; i + 1 < ber.size(); ++i) {
    if (ber[i] >= target_ber && ber[i + 1] < target_ber) {
      const double lo = std::log10(std::max(ber[i + 1], 1e-300));
      const double hi = std::log10(std::max(ber[i], 1e-300));
      const double t = hi > lo ? (hi - std::log10(target_ber)) / (hi - lo) : 0.0;
      return grid[i] + t * (grid[i + 1] - grid[i]);
    }
  }
  throw target_unreachable_error("curve '" + curve.metadata +
                                 "' does not reach the target BER within its grid");
}

double snr_gain_at_target(const BerCurve& curve_a, const BerCurve& curve_b,
                          double target_ber) {
  return crossing_snr_db(curve_b, target_ber) - crossing_snr_db(curve_a, target_ber);
}

}  // namespace fso
