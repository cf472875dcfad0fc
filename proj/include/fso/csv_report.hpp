// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 FSO LinkLab authors
#pragma once

#include <string>
#include <vector>

#include "fso/analysis.hpp"
#include "fso/scenario.hpp"

namespace fso {

// Stable CSV header contract.
inline constexpr const char* kCsvHeader =
    "snr_db,ber_analytic,ber_upper_bound,ber_mc,ci_low,ci_high";

// Zero prints "0"; nonzero magnitudes below 1e-3 print scientific with six
// significant digits; everything else prints decimal with six significant
// digits.
std::string format_csv_value(double value);

// Full CSV document: `#` metadata lines (effective scenario fingerprint plus
// the list of command-line-overridden fields), header, one row per grid point.
std::string render_curve_csv(const BerCurve& curve, const LinkScenario& scenario,
                             const std::vector<std::string>& overridden_fields);

// Atomic write: temp file in the destination directory, then rename.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace fso
