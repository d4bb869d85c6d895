#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "herm/fit.hpp"
#include "herm/spectral.hpp"

namespace herm {

// Where p sits relative to the radial-eigenfunction critical exponent
// p1 = 2d/(d-1).
enum class LpRegime { below_critical, at_critical, above_critical };

// Predicted growth of ||psi_n||_p (L^2-normalized, eigenvalue 4n + d) as a
// power of n:
//   p > p1:  n^{(d/2)(1/2 - 1/p) - 1/2}, matched above and below
//   p = p1:  n^{-1/4} ln^{1/p} n      (log_correction set)
//   p < p1:  n^{-(d/2)(1/2 - 1/p)}, upper bound only
// The exponent is continuous across p1 up to the log factor.
struct LpRatePrediction {
    int d = 2;
    double p = 2.0;
    double critical_p = 0.0;
    LpRegime regime = LpRegime::below_critical;
    double exponent = 0.0;
    double log_exponent = 0.0; // exponent of the ln n factor (1/p at p = p1)
    bool log_correction = false;
    bool two_sided = false;    // matching lower bound known (regime above)
};

LpRatePrediction lp_rate_prediction(int d, double p); // DomainError d < 2 or p < 2

// L^p(R^d) norm of psi_n for finite p. Adaptive quadrature in the radius
// with panel seams at the envelope-regime boundaries and a capped panel
// width inside the Airy window; the integration is carried past the last
// seam until the exponential envelope certifies the dropped remainder
// (tail_bound, in units of the integral).
struct LpNormDetail {
    double value = 0.0;      // ||psi_n||_p
    double integral = 0.0;   // Vol(S^{d-1}) * int |psi|^p r^{d-1} dr, tail included
    double tail_bound = 0.0; // certified bound on the dropped tail of that integral
    double r_cut = 0.0;      // radius where quadrature stops and the bound takes over
    std::size_t panels = 0;
};

LpNormDetail lp_norm_radial_detail(int n, int d, double p, double rel_tol = 1e-10);

// Finite p: the detail path above. p = infinity: grid sup of |psi_n| over
// [0, sqrt(lambda) + 3] with spacing 0.05 / sqrt(lambda) (the quadrature of
// |psi|^p is ill-conditioned long before p reaches infinity, so the sup is
// a separate code path rather than a large-p limit).
double lp_norm_radial(int n, int d, double p);

// Grid sups of |psi_n| for every n <= n_max from one streaming pass over a
// shared radius grid; same contract as hermite_sup_sweep.
std::vector<double> radial_sup_sweep(int d, int n_max,
                                     double grid_factor = 0.05, double grid_exponent = 0.5);

// ||psi_n||_p for every n <= n_max by one streaming pass over a fixed
// Simpson grid. A uniform radius grid works for all modes at once because
// the local wavenumber sqrt(lambda - r^2) is bounded by sqrt(lambda_max);
// points_per_wavelength is measured against that worst case. About 1e-3
// relative at 30 points per wavelength, 1e-8 at 200 (fourth-order error
// (2 pi / ppw)^4 / 180 per wavelength). p = infinity delegates to
// radial_sup_sweep.
std::vector<double> lp_norms_sweep(int d, int n_max, double p,
                                   double points_per_wavelength = 30.0);

// Growth of S_N = sum_{n=1..N} n^{d/2-1} |c_n|^2, the partial sums deciding
// the critical L^p convergence exponent of the random radial series. The
// slope is fitted over the last decade of N; slopes below 0.02 mean bounded
// partial sums and an infinite critical exponent.
struct AlphaStarDetail {
    double slope = 0.0;      // fitted growth exponent of S_N, clamped at 0
    bool bounded = false;    // slope < 0.02
    double critical_p = 0.0; // d / slope, +infinity when bounded
    RateFit fit;             // evidence (checkpointed S_N in log-log)
};

AlphaStarDetail alpha_star_detail(const CoefficientRule& rule, int d, std::int64_t n_max);

// The critical exponent d / alpha_star alone. DomainError for n_max < 1000
// (shorter runs cannot see a decade past the transient).
double alpha_star(const CoefficientRule& rule, int d, std::int64_t n_max);

// Truncated square-function norm
//   || sum_{4n+d <= lambda} |c_n psi_n|^2 ||_{L^{p/2}}^{1/2},
// the deterministic criterion for almost-sure L^p convergence of the random
// radial series: finite limits for p below d/alpha_star, divergence above.
// Monotone in lambda. One value per entry of lambdas (ascending), all from
// a single streaming pass.
std::vector<double> square_function_sweep(const CoefficientRule& rule, int d, double p,
                                          std::span<const double> lambdas,
                                          double points_per_wavelength = 30.0);

double square_function_lp(const CoefficientRule& rule, int d, double p, double lambda);

} // namespace herm
