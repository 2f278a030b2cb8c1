// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string>

namespace ltdr::cli {

/// Static line chart of a discount-rate curve with its band, maturity on a
/// log10 axis and rates shown in percent.
std::string curve_svg(std::span<const double> taus, std::span<const double> rates, std::span<const double> lo,
                      std::span<const double> hi, const std::string& title);

}  // namespace ltdr::cli
