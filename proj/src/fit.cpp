#include "gloa/fit.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace gloa {

PowerLawFit fit_power_law(std::span<const std::pair<double, double>> samples) {
    const std::size_t m = samples.size();
    if (m < 3)
        throw std::invalid_argument("fit_power_law: need at least 3 samples");
    std::vector<double> lx(m), ly(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (!(samples[i].first > 0.0) || !(samples[i].second > 0.0))
            throw std::invalid_argument("fit_power_law: samples must be positive");
        lx[i] = std::log(samples[i].first);
        ly[i] = std::log(samples[i].second);
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(m);
    my /= static_cast<double>(m);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (!(sxx > 0.0))
        throw std::invalid_argument("fit_power_law: x values must not all coincide");
    PowerLawFit fit;
    fit.exponent = sxy / sxx;
    fit.log_intercept = my - fit.exponent * mx;
    double sse = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double r = ly[i] - (fit.log_intercept + fit.exponent * lx[i]);
        sse += r * r;
    }
    fit.exponent_stderr = std::sqrt(sse / static_cast<double>(m - 2) / sxx);
    return fit;
}

} // namespace gloa
