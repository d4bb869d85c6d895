#include "herm/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <stdexcept>

#include "herm/errors.hpp"

namespace herm {

namespace {

// 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1].
// Abscissae are symmetric; only the non-negative half is stored.
// xgk[1], xgk[3], ... are the Gauss abscissae.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
};

constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};

constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

struct Panel {
    double a;
    double b;
    double value;
    double error;
    bool operator<(const Panel& other) const { return error < other.error; }
};

Panel evaluate_panel(const std::function<double(double)>& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    const double f_center = f(center);
    double kronrod = kWgk[7] * f_center;
    double gauss = kWg[3] * f_center;

    for (int i = 0; i < 7; ++i) {
        const double dx = half * kXgk[i];
        const double f_sum = f(center - dx) + f(center + dx);
        kronrod += kWgk[i] * f_sum;
        if (i % 2 == 1) gauss += kWg[i / 2] * f_sum;
    }

    Panel p;
    p.a = a;
    p.b = b;
    p.value = kronrod * half;
    p.error = std::fabs((kronrod - gauss) * half);
    return p;
}

} // namespace

PanelEstimate gk15_panel(const std::function<double(double)>& f, double a, double b) {
    const Panel p = evaluate_panel(f, a, b);
    return PanelEstimate{p.value, p.error};
}

QuadResult integrate_adaptive(const std::function<double(double)>& f,
                              std::span<const double> breakpoints,
                              double abs_tol,
                              std::size_t max_panels) {
    if (breakpoints.size() < 2) throw std::invalid_argument("integrate_adaptive: need at least 2 breakpoints");
    if (!std::is_sorted(breakpoints.begin(), breakpoints.end()))
        throw std::invalid_argument("integrate_adaptive: breakpoints must be sorted");

    std::priority_queue<Panel> queue;
    double total_value = 0.0;
    double total_error = 0.0;
    std::size_t panel_count = 0;

    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        if (breakpoints[i] == breakpoints[i + 1]) continue;
        Panel p = evaluate_panel(f, breakpoints[i], breakpoints[i + 1]);
        total_value += p.value;
        total_error += p.error;
        queue.push(p);
        ++panel_count;
    }

    while (total_error > abs_tol && !queue.empty()) {
        if (panel_count >= max_panels)
            throw BudgetExceeded("integrate_adaptive: panel budget exhausted before reaching tolerance");
        const Panel worst = queue.top();
        queue.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // interval no longer splittable in double precision; keep its estimate
            continue;
        }
        Panel left = evaluate_panel(f, worst.a, mid);
        Panel right = evaluate_panel(f, mid, worst.b);
        total_value += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        queue.push(left);
        queue.push(right);
        ++panel_count;
    }

    QuadResult out;
    out.value = total_value;
    out.abs_error = total_error;
    out.panels = panel_count;
    return out;
}

QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              double abs_tol, std::size_t max_panels) {
    const double pts[2] = {a, b};
    return integrate_adaptive(f, std::span<const double>(pts, 2), abs_tol, max_panels);
}

} // namespace herm
