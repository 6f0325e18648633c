#pragma once

#include <span>
#include <utility>

namespace gloa {

/// Least-squares fit of log(y) = intercept + exponent * log(x).
struct PowerLawFit {
    double exponent = 0.0;
    double exponent_stderr = 0.0;
    double log_intercept = 0.0;
};

/// Fits a power law y = c * x^b through (x, y) samples with x, y > 0.
/// Requires at least three points. Throws std::invalid_argument otherwise.
PowerLawFit fit_power_law(std::span<const std::pair<double, double>> samples);

} // namespace gloa
