#include "herm/fit.hpp"

#include <algorithm>
#include <cmath>

#include "herm/errors.hpp"

namespace herm {

RateFit fit_rate(std::span<const std::pair<double, double>> values,
                 double window_min, double window_max) {
    RateFit fit;
    fit.window_min = window_min;
    fit.window_max = window_max;
    for (const auto& [n, v] : values) {
        if (n < window_min || n > window_max) continue;
        if (!(n > 0.0)) throw DomainError("fit_rate: abscissas must be positive");
        if (!(v > 0.0)) throw DomainError("fit_rate: values must be positive");
        fit.pairs.emplace_back(std::log(n), std::log(v));
    }
    if (fit.pairs.size() < 5) throw DomainError("fit_rate: need at least 5 points in the window");

    double mean_x = 0.0, mean_y = 0.0;
    for (const auto& [x, y] : fit.pairs) {
        mean_x += x;
        mean_y += y;
    }
    mean_x /= static_cast<double>(fit.pairs.size());
    mean_y /= static_cast<double>(fit.pairs.size());

    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& [x, y] : fit.pairs) {
        sxx += (x - mean_x) * (x - mean_x);
        sxy += (x - mean_x) * (y - mean_y);
        syy += (y - mean_y) * (y - mean_y);
    }
    if (sxx == 0.0) throw Degenerate("fit_rate: all abscissas equal");

    fit.slope = sxy / sxx;
    fit.intercept = mean_y - fit.slope * mean_x;
    if (syy == 0.0) {
        fit.r_squared = 1.0; // constant data, slope 0 fits exactly
    } else {
        fit.r_squared = std::clamp((sxy * sxy) / (sxx * syy), 0.0, 1.0);
    }
    return fit;
}

} // namespace herm
