// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 FSO LinkLab authors
#pragma once

#include <stdexcept>
#include <string>

namespace fso {

// Matrix fails symmetry / positive-semidefiniteness requirements.
class invalid_matrix_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Requested computation exceeds the configured work budget.
class complexity_limit_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Adaptive integration did not converge within refinement limits.
class integration_failure_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A BER curve never reaches the requested target level.
class target_unreachable_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A scenario is internally inconsistent.
class scenario_validation_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fso
