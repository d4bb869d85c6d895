#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "herm/fit.hpp"
#include "herm/noise.hpp"
#include "herm/spectral.hpp"

namespace herm {

// How the mode index of a coefficient sequence maps onto eigenfunctions:
//   one_d   dimension-1 modes h_n, eigenvalue 2n + 1;
//   radial  rotation-invariant modes psi_n, eigenvalue 4n + d;
//   tensor  sorted tensor modes phi_alpha, eigenvalue 2|alpha| + d.
enum class SeriesMode { one_d, radial, tensor };

struct FieldSample {
    double lambda = 0.0;
    std::uint64_t seed = 0;
    int d = 1;
    SeriesMode mode = SeriesMode::one_d;
    std::vector<double> grid;   // points or radii; tensor: d-tuples, row-major
    std::vector<double> values;
    double grid_spacing = 0.0;  // spacing when the grid is uniform, else 0
};

// Random partial sum over the modes with eigenvalue <= lambda, evaluated on
// the grid. Entry n of the noise stream is tied to mode n, so samples at
// nested cutoffs share one realization. Evaluation is independent per grid
// point; the thread count never changes the values.
FieldSample sample_partial_sum(const CoefficientRule& rule, const RandomLaw& law,
                               double lambda, int d, SeriesMode mode,
                               std::span<const double> grid, std::uint64_t seed,
                               int threads = 1, std::int64_t mode_budget = 1000000);

// Grid maximum of |values|: a lower estimate of the true sup whose defect is
// controlled by the grid density (see bernstein_probe).
double sup_norm(const FieldSample& sample);

// m(h) = max |u(x) - u(y)| over grid pairs with |x - y| <= h, for each h.
// Uniform grids use a sliding-window scan; tensor grids fall back to the
// quadratic pair scan. Throws HTooSmall for h below twice the spacing.
std::vector<double> modulus_of_continuity(const FieldSample& sample,
                                          std::span<const double> h_list);

// Fits the growth exponent s of the gradient-to-sup ratio
// ||u'||_inf / ||u||_inf ~ lambda^s over random spans of modes below each
// lambda. Dimension 1 differentiates exactly through the coefficient
// recoupling; radial dimensions use centered differences on the ray.
RateFit bernstein_probe(int d, std::span<const double> lambda_list, int trials,
                        std::uint64_t seed);

struct SalemZygmundReport {
    std::vector<double> lambdas;
    std::vector<double> rho;       // bucket-max sums cut at floor(lambda / 2)
    std::vector<double> rho_full;  // same sums cut at floor(lambda)
    std::vector<std::array<double, 3>> sup_quantiles;    // 0.5 / 0.9 / 0.99
    std::vector<std::array<double, 3>> normalized_ratio; // sup / sqrt(ln lambda * rho)
};

// Monte-Carlo sweep of M_lambda = sup |u_lambda| across trials for every
// cutoff in lambda_list (ascending). One streaming pass per trial records
// the sups at all cutoffs along a single noise realization.
SalemZygmundReport salem_zygmund_experiment(const CoefficientRule& rule, const RandomLaw& law,
                                            int d, std::span<const double> lambda_list,
                                            int trials, std::uint64_t seed,
                                            SeriesMode mode, int threads = 1,
                                            double grid_factor = 0.05);

// Sup norms of the dyadic bucket blocks of one realization: entry K holds
// sup over the grid of the partial field built from the modes with bucket
// index in [2^K, 2^{K+1}), K = 0..k_max.
std::vector<double> block_sup_norms(const CoefficientRule& rule, const RandomLaw& law,
                                    int d, int k_max, std::uint64_t seed, SeriesMode mode,
                                    double grid_factor = 0.25, int threads = 1);

} // namespace herm
