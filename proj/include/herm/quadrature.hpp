#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace herm {

struct QuadResult {
    double value = 0.0;
    double abs_error = 0.0;  // accumulated error estimate over all panels
    std::size_t panels = 0;  // panels in the final subdivision
};

// Globally adaptive Gauss-Kronrod 7/15 integration over the union of the
// intervals [breakpoints[i], breakpoints[i+1]]. Breakpoints must be sorted;
// passing interior breakpoints forces panel seams there, which is how callers
// pin the envelope-regime boundaries and the turning-point window. The worst
// panel is bisected until the summed error estimate falls below abs_tol.
// Throws BudgetExceeded when max_panels panels cannot reach the tolerance.
QuadResult integrate_adaptive(const std::function<double(double)>& f,
                              std::span<const double> breakpoints,
                              double abs_tol,
                              std::size_t max_panels = 200000);

// Convenience overload for a single interval [a, b].
QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              double abs_tol, std::size_t max_panels = 200000);

// One non-adaptive Gauss-Kronrod 7/15 pass over [a, b]: returns the Kronrod
// value and the |Kronrod - Gauss| error estimate.
struct PanelEstimate {
    double value = 0.0;
    double error = 0.0;
};
PanelEstimate gk15_panel(const std::function<double(double)>& f, double a, double b);

} // namespace herm
