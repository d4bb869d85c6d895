#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace herm {

// Least-squares power-law fit on log-log axes. `pairs` stores the
// (ln n, ln value) points actually used, so the slope is recomputable.
struct RateFit {
    std::vector<std::pair<double, double>> pairs;
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    double window_min = 0.0; // n range the fit was restricted to
    double window_max = 0.0;
};

// OLS on (ln n, ln v) over the points with window_min <= n <= window_max.
// Requires at least 5 admissible points with v > 0 (DomainError otherwise)
// and throws Degenerate when all n coincide.
RateFit fit_rate(std::span<const std::pair<double, double>> values,
                 double window_min, double window_max);

} // namespace herm
