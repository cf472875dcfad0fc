// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 FSO LinkLab authors
#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "fso/errors.hpp"

namespace fso {

// Physicists' Gauss-Hermite rule: sum_i w_i f(x_i) ~ integral f(x) e^{-x^2} dx.
struct QuadratureRule {
  int order = 0;
  std::vector<double> nodes;    // strictly increasing, antisymmetric about 0
  std::vector<double> weights;  // positive, sum = sqrt(pi)
};

// Symmetric square root S of a unit-diagonal covariance matrix, S*S = Gamma'.
struct CovarianceFactor {
  int dimension = 0;
  Eigen::MatrixXd matrix;
};

// Golub-Welsch construction from the symmetric tridiagonal Jacobi matrix.
// Valid orders: 1..128.
QuadratureRule gauss_hermite(int order);

// Gaussian tail probability Q(x) = erfc(x/sqrt(2))/2.
double q_exact(double x);

// Two-exponential approximation (1/12)e^{-x^2/2} + (1/4)e^{-2x^2/3}, x >= 0.
double q_approx(double x);

// Unique symmetric PSD square root via eigendecomposition; eigenvalues in
// [-1e-10, 0) are clamped to 0, anything lower (or asymmetry beyond 1e-10)
// raises invalid_matrix_error.
CovarianceFactor sym_matrix_sqrt(const Eigen::MatrixXd& gamma);

// E[f(I)] with I = e^{2X}, X ~ Normal(-sigma_sq, sigma_sq), by adaptive
// Simpson integration to absolute tolerance abs_tol. Test oracle only; the
// library hot path uses Gauss-Hermite sums.
double lognormal_expectation_oracle(const std::function<double(double)>& integrand,
                                    double sigma_sq, double abs_tol = 1e-12);

}  // namespace fso
