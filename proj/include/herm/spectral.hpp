#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "herm/errors.hpp"

namespace herm {

// Exponent table for the sup bound on the bucket spectral function:
// gamma = -1/6 in dimension 1 and d/2 - 1 for d >= 2; beta = d - 1 - gamma.
struct SpectralLayout {
    int d = 1;
    double gamma = 0.0;
    double beta = 0.0;
};
SpectralLayout make_layout(int d); // DomainError for d < 1

std::int64_t binomial(int a, int b);

// Sorted-with-multiplicity ordering of the eigenvalues 2m + d: mode n sits
// at level m(n), the smallest m with binomial(m + d, d) > n.
int level_of_mode(std::int64_t n, int d);
double eigenvalue_of_mode(std::int64_t n, int d);

// Bucket j collects the modes with eigenvalue in [2j, 2j+2). At most one
// level falls in that window: m = floor((2j + 1 - d) / 2), empty when m < 0.
struct Bucket {
    std::int64_t j = 0;
    int d = 1;
    int level = -1;            // -1 marks an empty bucket
    double eigenvalue = 0.0;   // 2*level + d when nonempty
    std::int64_t count = 0;
    std::int64_t first_mode = 0; // sorted index of the first member
};
Bucket make_bucket(std::int64_t j, int d);

std::int64_t bucket_of(std::int64_t n, int d);

// Bucket index of the rotation-invariant mode with eigenvalue 4n + d.
std::int64_t radial_bucket_of(std::int64_t n, int d);

// All multi-indices of the bucket, lexicographic. The position in this list
// plus Bucket::first_mode is the sorted mode index.
std::vector<std::vector<int>> bucket_members(std::int64_t j, int d);

// Sum of squared tensor eigenfunctions over the bucket at the point x
// (x.size() == d). Cost control: d <= 3 and bucket count <= 1e5, else
// BudgetExceeded.
double spectral_function(std::int64_t j, int d, std::span<const double> x);

// Grid sup of the bucket spectral function over the ball of radius
// sqrt(2j+2) + 3, divided by j^gamma. Grid spacing grid_factor / lambda^
// grid_exponent; the 0.5 default comes from the gradient-vs-sup probe in
// the sampling module (see bernstein_probe). Dimension 1 uses evenness,
// d in {2, 3} a radial ray.
double karadzhov_ratio(std::int64_t j, int d,
                       double grid_factor = 0.05, double grid_exponent = 0.5);

// Sups of |h_n| over [0, sqrt(2 n_max + 2) + 3] for every order n <= n_max,
// from a single streaming recurrence pass over a shared grid (spacing set
// by the largest eigenvalue, so denser than any single order needs).
std::vector<double> hermite_sup_sweep(int n_max,
                                      double grid_factor = 0.05, double grid_exponent = 0.5);

// ---------------------------------------------------------------------------
// Coefficient sequences |c_n| and the norms / conditions built from them.

struct CoefficientRule {
    enum class Kind { power_law, bucket_power, dyadic_block, explicit_list };
    Kind kind = Kind::power_law;

    // power_law: |c_n| = amplitude * n^{-kappa} for n >= 1, |c_0| = amplitude * c0
    double kappa = 0.0;
    double c0 = 1.0;
    double amplitude = 1.0;

    // bucket_power: |c_n|^2 = amplitude^2 * max(j,1)^power * ln(max(j,2))^log_power
    // for every mode of bucket j (constant within the bucket)
    double power = 0.0;
    double log_power = 0.0;

    // dyadic_block: |c_n|^2 = 2^{(-gamma - mu) K} * max(K,1)^{2 nu} / 2^K with
    // K = floor(log2(max(j,1))); the division by the block width 2^K makes the
    // block sums of bucket maxima hit the budget 2^{(-gamma-mu)K} K^{2 nu}
    // with equality
    double mu = 0.0;
    double nu = 0.0;
    double gamma = 0.0;

    std::vector<double> explicit_values; // |c_n| by sorted mode index

    // |c_n| for the mode n lying in bucket j (callers that already know the
    // bucket pass it in; the bucket kinds depend on j only).
    double value(std::int64_t n, std::int64_t j) const;
    double value_sq(std::int64_t n, std::int64_t j) const;

    double bucket_max_sq(std::int64_t j, int d) const;
    double bucket_min_sq(std::int64_t j, int d) const;
    double bucket_sum_sq(std::int64_t j, int d) const; // sum over the members
};

CoefficientRule power_law_rule(double kappa, double c0 = 1.0, double amplitude = 1.0);
CoefficientRule bucket_power_rule(double power, double log_power = 0.0, double amplitude = 1.0);
CoefficientRule dyadic_block_rule(double mu, double nu, double gamma);
CoefficientRule explicit_rule(std::vector<double> values);

// Truncated Sobolev-type norm (sum over modes of lambda_n^s |c_n|^2)^{1/2}.
double hs_norm(const CoefficientRule& rule, double s, int d, std::int64_t n_max);

// Truncated bucket-max norm (sum over j >= 1 of j^{s+d-1} max_{I(j)} |c_n|^2)^{1/2}.
double zs_norm(const CoefficientRule& rule, double s, int d, std::int64_t j_max);

// ---------------------------------------------------------------------------
// Coefficient-space conditions. Finite truncations cannot prove convergence
// or boundedness, so every verdict is a fitted-slope decision shipped with
// the underlying sequence (see ConditionReport fields).

enum class ConditionKind {
    bucket_max_vs_mean,  // max over bucket <= C * mean over bucket
    bucket_comparable,   // two-sided: every |c_k|^2 within [C1, C2] * mean
    lp_weighted_sum,     // sum of j^{gamma + 2 beta / p} * bucket max finite
    log_weighted_sum,    // sum of j^gamma (ln j)^alpha * bucket max finite
    block_decay          // dyadic block sums <= C 2^{(-gamma-mu)K} K^{2 nu}
};

struct ConditionQuery {
    ConditionKind kind = ConditionKind::bucket_max_vs_mean;
    double p = 2.0;      // lp_weighted_sum
    double alpha = 1.0;  // log_weighted_sum
    double mu = 0.5;     // block_decay
    double nu = 0.0;     // block_decay
};

struct ConditionReport {
    bool holds = false;
    double upper_constant = 0.0;      // best C covering the tested range
    double lower_constant = 0.0;      // best C1 (bucket_comparable only)
    std::int64_t witness_j = -1;      // bucket (or block start) binding the constant
    double tail_slope = 0.0;          // log-log slope over the last decade
    std::vector<double> partial_sums; // summability kinds: running sums by j;
                                      // block_decay: per-block constants
};

// Evaluates the condition over buckets 1..j_budget (blocks fully inside the
// budget for block_decay). Boundedness verdicts use slope < 0.05 over the
// last decade; summability verdicts use term slope < -1.05.
ConditionReport check_condition(const CoefficientRule& rule, const ConditionQuery& query,
                                int d, std::int64_t j_budget);

} // namespace herm
