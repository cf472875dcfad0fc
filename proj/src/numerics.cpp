// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 FSO LinkLab authors
#include "fso/numerics.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

namespace fso {

namespace {

constexpr double kSqrtPi = 1.7724538509055160273;

// Orthonormal Hermite functions for the weight e^{-x^2}:
//   p_0 = pi^{-1/4},  p_{k+1} = x sqrt(2/(k+1)) p_k - sqrt(k/(k+1)) p_{k-1}.
// Returns p_{order}(x) and p_{order-1}(x).
std::pair<double, double> hermite_pair(int order, double x) {
  double prev = 0.0;
  double cur = std::pow(std::numbers::pi, -0.25);
  for (int k = 0; k < order; ++k) {
    const double next =
        x * std::sqrt(2.0 / (k + 1)) * cur - std::sqrt(k / (k + 1.0)) * prev;
    prev = cur;
    cur = next;
  }
  return {cur, prev};
}

}  // namespace

QuadratureRule gauss_hermite(int order) {
  if (order < 1 || order > 128) {
    throw std::invalid_argument("gauss_hermite: order must be in [1, 128], got " +
                                std::to_string(order));
  }
  QuadratureRule rule;
  rule.order = order;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  if (order == 1) {
    rule.nodes[0] = 0.0;
    rule.weights[0] = kSqrtPi;
    return rule;
  }

  Eigen::VectorXd diag = Eigen::VectorXd::Zero(order);
  Eigen::VectorXd sub(order - 1);
  for (int k = 1; k < order; ++k) sub[k - 1] = std::sqrt(k / 2.0);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw integration_failure_error("gauss_hermite: eigensolve failed");
  }
  // Eigenvalues give the nodes to working precision; polish each with two
  // Newton steps on p_N (derivative sqrt(2N) p_{N-1}) and take the weight
  // from the Christoffel function 1/sum_k p_k^2. Eigenvector-based weights
  // lose relative accuracy exactly where the weights are tiny.
  for (int i = 0; i < order; ++i) {
    double x = solver.eigenvalues()[i];
    for (int step = 0; step < 2; ++step) {
      const auto [pn, pn1] = hermite_pair(order, x);
      const double derivative = std::sqrt(2.0 * order) * pn1;
      if (derivative == 0.0) break;
      x -= pn / derivative;
    }
    rule.nodes[i] = x;
    double prev = 0.0;
    double cur = std::pow(std::numbers::pi, -0.25);
    double christoffel = cur * cur;
    for (int k = 0; k + 1 < order; ++k) {
      const double next =
          x * std::sqrt(2.0 / (k + 1)) * cur - std::sqrt(k / (k + 1.0)) * prev;
      prev = cur;
      cur = next;
      christoffel += cur * cur;
    }
    rule.weights[i] = 1.0 / christoffel;
  }
  // Eigenvalues arrive sorted; enforce the exact +/- pairing the rule owes.
  for (int i = 0, j = order - 1; i < j; ++i, --j) {
    const double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
    rule.nodes[i] = -x;
    rule.nodes[j] = x;
    const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
    rule.weights[i] = w;
    rule.weights[j] = w;
  }
  if (order % 2 == 1) rule.nodes[order / 2] = 0.0;
  return rule;
}

double q_exact(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double q_approx(double x) {
  if (std::isnan(x) || x < 0.0) {
    throw std::invalid_argument("q_approx: argument must be >= 0");
  }
  return std::exp(-0.5 * x * x) / 12.0 + std::exp(-2.0 * x * x / 3.0) / 4.0;
}

CovarianceFactor sym_matrix_sqrt(const Eigen::MatrixXd& gamma) {
  if (gamma.rows() != gamma.cols() || gamma.rows() == 0) {
    throw invalid_matrix_error("sym_matrix_sqrt: matrix must be square and nonempty");
  }
  const double scale = std::max(1.0, gamma.cwiseAbs().maxCoeff());
  if ((gamma - gamma.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw invalid_matrix_error("sym_matrix_sqrt: matrix is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gamma);
  if (solver.info() != Eigen::Success) {
    throw invalid_matrix_error("sym_matrix_sqrt: eigendecomposition failed");
  }
  Eigen::VectorXd ev = solver.eigenvalues();
  for (int i = 0; i < ev.size(); ++i) {
    if (ev[i] < -1e-10 * scale) {
      throw invalid_matrix_error("sym_matrix_sqrt: matrix is indefinite (eigenvalue " +
                                 std::to_string(ev[i]) + ")");
    }
    ev[i] = std::sqrt(std::max(ev[i], 0.0));
  }
  CovarianceFactor factor;
  factor.dimension = static_cast<int>(gamma.rows());
  factor.matrix =
      solver.eigenvectors() * ev.asDiagonal() * solver.eigenvectors().transpose();
  // The eigendecomposition root is symmetric up to roundoff; make it exact.
  factor.matrix = 0.5 * (factor.matrix + factor.matrix.transpose()).eval();
  return factor;
}

namespace {

struct SimpsonCtx {
  const std::function<double(double)>* g;
  long long evals = 0;
  long long max_evals = 50'000'000;
};

double adaptive_simpson(SimpsonCtx& ctx, double a, double b, double fa, double fm,
                        double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = (*ctx.g)(lm);
  const double frm = (*ctx.g)(rm);
  ctx.evals += 2;
  if (ctx.evals > ctx.max_evals) {
    throw integration_failure_error("lognormal_expectation_oracle: evaluation budget exceeded");
  }
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0) {
    throw integration_failure_error("lognormal_expectation_oracle: max refinement depth reached");
  }
  if (std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_simpson(ctx, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(ctx, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double lognormal_expectation_oracle(const std::function<double(double)>& integrand,
                                    double sigma_sq, double abs_tol) {
  if (sigma_sq < 0.0) {
    throw std::invalid_argument("lognormal_expectation_oracle: sigma_sq must be >= 0");
  }
  if (sigma_sq == 0.0) return integrand(1.0);

  const double sigma = std::sqrt(sigma_sq);
  const auto g = [&](double z) {
    const double fade = std::exp(2.0 * (sigma * z - sigma_sq));
    return integrand(fade) * std::exp(-0.5 * z * z) /
           std::sqrt(2.0 * std::numbers::pi);
  };
  const std::function<double(double)> gf = g;

  // +/-16 standard normal deviations bounds the truncation far below 1e-12
  // for integrands bounded on the effective support.
  const double a = -16.0, b = 16.0;
  SimpsonCtx ctx{&gf};
  double total = 0.0;
  const int pieces = 32;  // seed intervals so the knee is never straddled
  const double h = (b - a) / pieces;
  for (int i = 0; i < pieces; ++i) {
    const double lo = a + i * h, hi = lo + h, mid = 0.5 * (lo + hi);
    const double flo = gf(lo), fmid = gf(mid), fhi = gf(hi);
    ctx.evals += 3;
    const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
    total += adaptive_simpson(ctx, lo, hi, flo, fmid, fhi, whole,
                              abs_tol / pieces, 64);
  }
  return total;
}

}  // namespace fso
