#include "herm/lp_rates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "herm/laguerre.hpp"
#include "herm/quadrature.hpp"
#include "herm/radial.hpp"

namespace herm {

LpRatePrediction lp_rate_prediction(int d, double p) {
    if (d < 2) throw DomainError("lp_rate_prediction: d must be >= 2");
    if (!(p >= 2.0)) throw DomainError("lp_rate_prediction: p must be >= 2");

    LpRatePrediction out;
    out.d = d;
    out.p = p;
    out.critical_p = 2.0 * d / (d - 1.0);
    const double half_gap = 0.5 - (std::isinf(p) ? 0.0 : 1.0 / p);
    if (p > out.critical_p) {
        out.regime = LpRegime::above_critical;
        out.exponent = 0.5 * d * half_gap - 0.5;
        out.two_sided = true;
    } else if (p == out.critical_p) {
        out.regime = LpRegime::at_critical;
        out.exponent = -0.25;
        out.log_exponent = 1.0 / p;
        out.log_correction = true;
    } else {
        out.regime = LpRegime::below_critical;
        out.exponent = -0.5 * d * half_gap;
    }
    return out;
}

namespace {

constexpr double kTailSafety = 10.0; // envelope-constant calibration margin

// Uniform Simpson grid over radii [0, sqrt(1.5 lambda_max + 600)]; the upper
// end sits past every mode's turning point by enough that exp(-kValidTailRate
// * r^2) has decayed below any tolerance in play.
struct SimpsonGrid {
    std::vector<double> radii;
    std::vector<double> weights; // Simpson weight * rho^{d-1}, volume factor excluded
};

SimpsonGrid make_simpson_grid(int d, double lambda_max, double ppw) {
    if (!(ppw >= 4.0)) throw DomainError("simpson grid: points_per_wavelength must be >= 4");
    const double step = 2.0 * std::numbers::pi / (ppw * std::sqrt(lambda_max));
    const double r_max = std::sqrt(1.5 * lambda_max + 600.0);
    const auto half_panels = static_cast<std::size_t>(std::ceil(r_max / (2.0 * step)));
    const std::size_t count = 2 * half_panels + 1;

    SimpsonGrid grid;
    grid.radii.resize(count);
    grid.weights.resize(count);
    for (std::size_t g = 0; g < count; ++g) {
        grid.radii[g] = step * static_cast<double>(g);
        const double simpson = (g == 0 || g + 1 == count) ? 1.0 : (g % 2 == 1 ? 4.0 : 2.0);
        grid.weights[g] = simpson * step / 3.0 * std::pow(grid.radii[g], d - 1);
    }
    return grid;
}

// |v|^p with a multiplication ladder for small integer p (the pow call
// dominates the sweep cost otherwise).
struct PowerEvaluator {
    double p = 2.0;
    int int_p = -1;
    explicit PowerEvaluator(double p_in) : p(p_in) {
        const double r = std::round(p_in);
        if (std::fabs(p_in - r) < 1e-12 && r >= 1.0 && r <= 16.0) int_p = static_cast<int>(r);
    }
    double operator()(double v) const {
        if (int_p > 0) {
            double a = std::fabs(v);
            double out = 1.0;
            for (int k = 0; k < int_p; ++k) out *= a;
            return out;
        }
        return std::pow(std::fabs(v), p);
    }
};

} // namespace

std::vector<double> radial_sup_sweep(int d, int n_max, double grid_factor, double grid_exponent) {
    make_radial_basis(d); // dimension check
    if (n_max < 0) throw DomainError("radial_sup_sweep: n_max must be >= 0");
    const double lambda_max = 4.0 * n_max + d;
    const double r_max = std::sqrt(lambda_max) + 3.0;
    const double step = grid_factor / std::pow(lambda_max, grid_exponent);
    const auto count = static_cast<std::size_t>(std::ceil(r_max / step)) + 1;
    std::vector<double> radii(count);
    for (std::size_t g = 0; g < count; ++g) radii[g] = step * static_cast<double>(g);

    std::vector<double> sups(static_cast<std::size_t>(n_max) + 1, 0.0);
    radial_sweep_all(d, n_max, std::span<const double>(radii),
                     [&](int n, std::span<const double> values) {
                         double sup = 0.0;
                         for (double v : values) sup = std::max(sup, std::fabs(v));
                         sups[static_cast<std::size_t>(n)] = sup;
                     });
    return sups;
}

std::vector<double> lp_norms_sweep(int d, int n_max, double p, double points_per_wavelength) {
    if (std::isinf(p)) return radial_sup_sweep(d, n_max);
    make_radial_basis(d); // dimension check
    if (n_max < 0) throw DomainError("lp_norms_sweep: n_max must be >= 0");
    if (!(p >= 1.0)) throw DomainError("lp_norms_sweep: p must be >= 1");

    const double lambda_max = 4.0 * n_max + d;
    const SimpsonGrid grid = make_simpson_grid(d, lambda_max, points_per_wavelength);
    const double vol = sphere_surface_volume(d);
    const PowerEvaluator power(p);

    std::vector<double> norms(static_cast<std::size_t>(n_max) + 1, 0.0);
    radial_sweep_all(d, n_max, std::span<const double>(grid.radii),
                     [&](int n, std::span<const double> values) {
                         double acc = 0.0;
                         for (std::size_t g = 0; g < values.size(); ++g) {
                             acc += grid.weights[g] * power(values[g]);
                         }
                         norms[static_cast<std::size_t>(n)] = std::pow(vol * acc, 1.0 / p);
                     });
    return norms;
}

LpNormDetail lp_norm_radial_detail(int n, int d, double p, double rel_tol) {
    const RadialBasis basis = make_radial_basis(d);
    if (n < 0) throw DomainError("lp_norm_radial_detail: n must be >= 0");
    if (!(p >= 1.0) || std::isinf(p)) {
        throw DomainError("lp_norm_radial_detail: p must be finite and >= 1");
    }

    const double nu = 4.0 * n + d;
    const double nu_cbrt = std::cbrt(nu);
    // carry the quadrature past the last envelope seam until the certified
    // envelope tail is negligible against any plausible integral size
    const double u_cut = 1.5 * nu + 460.0 / p + 60.0;

    std::vector<double> u_seams = {0.0, 1.0 / nu, 0.5 * nu, 1.5 * nu, u_cut};
    const double airy_lo = std::max(0.0, nu - 5.0 * nu_cbrt);
    const double airy_hi = std::min(1.5 * nu, nu + 5.0 * nu_cbrt);
    for (double u = airy_lo; u <= airy_hi; u += 0.25 * nu_cbrt) u_seams.push_back(u);
    std::sort(u_seams.begin(), u_seams.end());
    u_seams.erase(std::unique(u_seams.begin(), u_seams.end()), u_seams.end());

    std::vector<double> breakpoints;
    breakpoints.reserve(u_seams.size());
    for (double u : u_seams) breakpoints.push_back(std::sqrt(u));

    const PowerEvaluator power(p);
    const auto integrand = [&](double r) {
        return power(radial_hermite(n, d, r)) * std::pow(r, d - 1);
    };

    // coarse single-panel pass fixes the tolerance scale (the integrand is
    // nonnegative, so this cannot be off by more than the panel count)
    double scale = 0.0;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        scale += gk15_panel(integrand, breakpoints[i], breakpoints[i + 1]).value;
    }
    scale = std::max(scale, 1e-300);

    QuadResult q = integrate_adaptive(integrand, std::span<const double>(breakpoints),
                                      rel_tol * scale);
    if (q.value > 3.0 * scale) {
        q = integrate_adaptive(integrand, std::span<const double>(breakpoints),
                               rel_tol * q.value);
    }

    // beyond u_cut: |psi(r)| <= c(d) C e^{-rate r^2} r^{-(d/2-1)} with C
    // calibrated to the turning-regime envelope at the 3nu/2 seam
    const double rate = kValidTailRate;
    const double seam_env = std::pow(nu, -0.25) * std::pow(nu_cbrt + 0.5 * nu, -0.25);
    const double log_c_env = std::log(kTailSafety * seam_env) + rate * 1.5 * nu;
    const double a = p * rate;
    const double tail_q = 0.5 * (d - 2.0 - p * (0.5 * d - 1.0));
    const double log_tail = p * (std::log(basis.c_of_d) + log_c_env) + tail_q * std::log(u_cut) -
                            a * u_cut + std::log((tail_q <= 0.0 ? 1.0 : 2.0) / a) - std::log(2.0);

    const double vol = sphere_surface_volume(d);
    LpNormDetail out;
    out.tail_bound = vol * std::exp(log_tail);
    out.integral = vol * q.value + out.tail_bound;
    out.value = std::pow(out.integral, 1.0 / p);
    out.r_cut = std::sqrt(u_cut);
    out.panels = q.panels;
    return out;
}

double lp_norm_radial(int n, int d, double p) {
    if (std::isinf(p)) {
        make_radial_basis(d); // dimension check
        if (n < 0) throw DomainError("lp_norm_radial: n must be >= 0");
        const double lambda = 4.0 * n + d;
        const double step = 0.05 / std::sqrt(lambda);
        const double r_max = std::sqrt(lambda) + 3.0;
        const auto count = static_cast<std::size_t>(std::ceil(r_max / step)) + 1;
        std::vector<double> radii(count);
        for (std::size_t g = 0; g < count; ++g) radii[g] = step * static_cast<double>(g);
        double sup = 0.0;
        radial_sweep_all(d, n, std::span<const double>(radii),
                         [&](int k, std::span<const double> values) {
                             if (k != n) return;
                             for (double v : values) sup = std::max(sup, std::fabs(v));
                         });
        return sup;
    }
    return lp_norm_radial_detail(n, d, p).value;
}

AlphaStarDetail alpha_star_detail(const CoefficientRule& rule, int d, std::int64_t n_max) {
    if (d < 2) throw DomainError("alpha_star: d must be >= 2");
    if (n_max < 1000) throw DomainError("alpha_star: n_max must be >= 1000");

    // S_N at ~12 geometric checkpoints per decade
    std::vector<std::pair<double, double>> checkpoints;
    const double ratio = std::pow(10.0, 1.0 / 12.0);
    double next_check = 10.0;
    double s = 0.0;
    for (std::int64_t n = 1; n <= n_max; ++n) {
        const double c_sq = rule.value_sq(n, radial_bucket_of(n, d));
        s += std::pow(static_cast<double>(n), 0.5 * d - 1.0) * c_sq;
        if (n == n_max || static_cast<double>(n) >= next_check) {
            if (s > 0.0) checkpoints.emplace_back(static_cast<double>(n), s);
            while (next_check <= static_cast<double>(n)) next_check *= ratio;
        }
    }

    AlphaStarDetail out;
    if (checkpoints.empty()) { // identically zero coefficients
        out.bounded = true;
        out.critical_p = std::numeric_limits<double>::infinity();
        return out;
    }
    out.fit = fit_rate(std::span<const std::pair<double, double>>(checkpoints),
                       static_cast<double>(n_max) / 10.0, static_cast<double>(n_max));
    out.slope = std::max(0.0, out.fit.slope);
    out.bounded = out.fit.slope < 0.02;
    out.critical_p = out.bounded ? std::numeric_limits<double>::infinity() : d / out.slope;
    return out;
}

double alpha_star(const CoefficientRule& rule, int d, std::int64_t n_max) {
    return alpha_star_detail(rule, d, n_max).critical_p;
}

std::vector<double> square_function_sweep(const CoefficientRule& rule, int d, double p,
                                          std::span<const double> lambdas,
                                          double points_per_wavelength) {
    make_radial_basis(d); // dimension check
    if (!(p >= 2.0)) throw DomainError("square_function_sweep: p must be >= 2");
    if (lambdas.empty()) throw DomainError("square_function_sweep: empty lambda list");
    for (std::size_t i = 0; i + 1 < lambdas.size(); ++i) {
        if (!(lambdas[i] < lambdas[i + 1])) {
            throw DomainError("square_function_sweep: lambda list must ascend");
        }
    }

    // cutoff i is complete once mode last_n[i] has been accumulated
    std::vector<std::int64_t> last_n(lambdas.size());
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        last_n[i] = lambdas[i] >= d
                        ? static_cast<std::int64_t>(std::floor((lambdas[i] - d) / 4.0))
                        : -1;
    }
    const std::int64_t n_top = last_n.back();

    const double vol = sphere_surface_volume(d);
    std::vector<double> out(lambdas.size(), 0.0);
    std::size_t next = 0;
    while (next < lambdas.size() && last_n[next] < 0) ++next; // empty sums stay 0
    if (n_top < 0) return out;

    const SimpsonGrid grid = make_simpson_grid(d, 4.0 * n_top + d, points_per_wavelength);
    std::vector<double> g_sum(grid.radii.size(), 0.0);
    auto checkpoint = [&]() {
        double acc = 0.0;
        for (std::size_t g = 0; g < g_sum.size(); ++g) {
            acc += grid.weights[g] * std::pow(g_sum[g], 0.5 * p);
        }
        return std::pow(vol * acc, 1.0 / p);
    };

    radial_sweep_all(d, static_cast<int>(n_top), std::span<const double>(grid.radii),
                     [&](int n, std::span<const double> values) {
                         const double c_sq = rule.value_sq(n, radial_bucket_of(n, d));
                         if (c_sq != 0.0) {
                             for (std::size_t g = 0; g < values.size(); ++g) {
                                 g_sum[g] += c_sq * values[g] * values[g];
                             }
                         }
                         while (next < lambdas.size() && last_n[next] == n) {
                             out[next] = checkpoint();
                             ++next;
                         }
                     });
    return out;
}

double square_function_lp(const CoefficientRule& rule, int d, double p, double lambda) {
    const double lambdas[1] = {lambda};
    return square_function_sweep(rule, d, p, std::span<const double>(lambdas), 200.0)[0];
}

} // namespace herm
