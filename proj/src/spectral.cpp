#include "herm/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "herm/fit.hpp"
#include "herm/hermite.hpp"

namespace herm {

SpectralLayout make_layout(int d) {
    if (d < 1) throw DomainError("make_layout: d must be >= 1");
    SpectralLayout layout;
    layout.d = d;
    layout.gamma = (d == 1) ? -1.0 / 6.0 : 0.5 * d - 1.0;
    layout.beta = static_cast<double>(d - 1) - layout.gamma;
    return layout;
}

std::int64_t binomial(int a, int b) {
    if (b < 0 || b > a) return 0;
    b = std::min(b, a - b);
    std::int64_t result = 1;
    for (int i = 1; i <= b; ++i) {
        result = result * (a - b + i) / i; // exact: product of i consecutive ints
    }
    return result;
}

int level_of_mode(std::int64_t n, int d) {
    if (n < 0) throw DomainError("level_of_mode: n must be >= 0");
    if (d < 1) throw DomainError("level_of_mode: d must be >= 1");
    if (d == 1) return static_cast<int>(n);
    std::int64_t cumulative = 0;
    for (int m = 0;; ++m) {
        cumulative += binomial(m + d - 1, d - 1);
        if (cumulative > n) return m;
    }
}

double eigenvalue_of_mode(std::int64_t n, int d) {
    return 2.0 * level_of_mode(n, d) + static_cast<double>(d);
}

Bucket make_bucket(std::int64_t j, int d) {
    if (j < 0) throw DomainError("make_bucket: j must be >= 0");
    if (d < 1) throw DomainError("make_bucket: d must be >= 1");
    Bucket bucket;
    bucket.j = j;
    bucket.d = d;
    const std::int64_t numer = 2 * j + 1 - d;
    if (numer < 0) return bucket; // window [2j, 2j+2) below the ground state
    const int m = static_cast<int>(numer / 2);
    bucket.level = m;
    bucket.eigenvalue = 2.0 * m + d;
    bucket.count = binomial(m + d - 1, d - 1);
    bucket.first_mode = binomial(m + d - 1, d);
    return bucket;
}

std::int64_t bucket_of(std::int64_t n, int d) {
    return (2 * static_cast<std::int64_t>(level_of_mode(n, d)) + d) / 2;
}

std::int64_t radial_bucket_of(std::int64_t n, int d) {
    if (n < 0) throw DomainError("radial_bucket_of: n must be >= 0");
    return (4 * n + d) / 2;
}

namespace {

void enumerate_compositions(int remaining, int slot, std::vector<int>& current,
                            std::vector<std::vector<int>>& out) {
    if (slot == static_cast<int>(current.size()) - 1) {
        current[static_cast<std::size_t>(slot)] = remaining;
        out.push_back(current);
        return;
    }
    for (int a = 0; a <= remaining; ++a) {
        current[static_cast<std::size_t>(slot)] = a;
        enumerate_compositions(remaining - a, slot + 1, current, out);
    }
}

} // namespace

std::vector<std::vector<int>> bucket_members(std::int64_t j, int d) {
    const Bucket bucket = make_bucket(j, d);
    std::vector<std::vector<int>> members;
    if (bucket.level < 0) return members;
    members.reserve(static_cast<std::size_t>(bucket.count));
    std::vector<int> current(static_cast<std::size_t>(d), 0);
    enumerate_compositions(bucket.level, 0, current, members);
    return members;
}

double spectral_function(std::int64_t j, int d, std::span<const double> x) {
    if (d > 3) throw BudgetExceeded("spectral_function: d > 3 not supported");
    if (static_cast<int>(x.size()) != d) throw DomainError("spectral_function: point size != d");
    const Bucket bucket = make_bucket(j, d);
    if (bucket.level < 0) return 0.0;
    if (bucket.count > 100000) throw BudgetExceeded("spectral_function: bucket too large");
    const int m = bucket.level;

    if (d == 1) {
        const double v = hermite_batch(x[0], m).values[static_cast<std::size_t>(m)];
        return v * v;
    }
    if (d == 2) {
        const HermiteBatch b0 = hermite_batch(x[0], m);
        const HermiteBatch b1 = hermite_batch(x[1], m);
        double sum = 0.0;
        for (int a = 0; a <= m; ++a) {
            const double u = b0.values[static_cast<std::size_t>(a)];
            const double v = b1.values[static_cast<std::size_t>(m - a)];
            sum += u * u * v * v;
        }
        return sum;
    }
    const HermiteBatch b0 = hermite_batch(x[0], m);
    const HermiteBatch b1 = hermite_batch(x[1], m);
    const HermiteBatch b2 = hermite_batch(x[2], m);
    double sum = 0.0;
    for (int a = 0; a <= m; ++a) {
        const double u2 = b0.values[static_cast<std::size_t>(a)] * b0.values[static_cast<std::size_t>(a)];
        for (int b = 0; b <= m - a; ++b) {
            const double v = b1.values[static_cast<std::size_t>(b)];
            const double w = b2.values[static_cast<std::size_t>(m - a - b)];
            sum += u2 * v * v * w * w;
        }
    }
    return sum;
}

namespace {

std::vector<double> uniform_grid(double upper, double spacing) {
    const auto count = static_cast<std::size_t>(std::ceil(upper / spacing)) + 1;
    std::vector<double> grid(count);
    for (std::size_t g = 0; g < count; ++g) grid[g] = spacing * static_cast<double>(g);
    return grid;
}

} // namespace

double karadzhov_ratio(std::int64_t j, int d, double grid_factor, double grid_exponent) {
    const Bucket bucket = make_bucket(j, d);
    if (bucket.level < 0) return 0.0;
    if (d > 3) throw BudgetExceeded("karadzhov_ratio: d > 3 not supported");
    const int m = bucket.level;
    const double lambda = 2.0 * j + 2.0;
    const double radius = std::sqrt(lambda) + 3.0;
    const double spacing = grid_factor / std::pow(lambda, grid_exponent);
    const std::vector<double> grid = uniform_grid(radius, spacing);

    double sup = 0.0;
    if (d == 1) {
        // evenness of h_m^2: the half grid [0, R] covers the ball
        hermite_sweep(std::span<const double>(grid), m, [&](int k, std::span<const double> v) {
            if (k != m) return;
            for (double value : v) sup = std::max(sup, value * value);
        });
    } else {
        // rotation invariance: restrict to the ray x = (r, 0, ..., 0) and
        // fold the off-ray factors into per-order weights from h_l(0)^2
        const HermiteBatch at_zero = hermite_batch(0.0, m);
        std::vector<double> weight(static_cast<std::size_t>(m) + 1, 0.0);
        if (d == 2) {
            for (int l = 0; l <= m; ++l) {
                const double h0 = at_zero.values[static_cast<std::size_t>(l)];
                weight[static_cast<std::size_t>(l)] = h0 * h0;
            }
        } else {
            for (int l = 0; l <= m; ++l) {
                for (int b = 0; b <= l; ++b) {
                    const double hb = at_zero.values[static_cast<std::size_t>(b)];
                    const double hc = at_zero.values[static_cast<std::size_t>(l - b)];
                    weight[static_cast<std::size_t>(l)] += hb * hb * hc * hc;
                }
            }
        }
        std::vector<double> acc(grid.size(), 0.0);
        hermite_sweep(std::span<const double>(grid), m, [&](int k, std::span<const double> v) {
            const double w = weight[static_cast<std::size_t>(m - k)];
            if (w == 0.0) return;
            for (std::size_t g = 0; g < grid.size(); ++g) acc[g] += v[g] * v[g] * w;
        });
        sup = *std::max_element(acc.begin(), acc.end());
    }
    const SpectralLayout layout = make_layout(d);
    return sup / std::pow(static_cast<double>(j), layout.gamma);
}

std::vector<double> hermite_sup_sweep(int n_max, double grid_factor, double grid_exponent) {
    const double lambda = 2.0 * n_max + 2.0;
    const double radius = std::sqrt(lambda) + 3.0;
    const double spacing = grid_factor / std::pow(lambda, grid_exponent);
    const std::vector<double> grid = uniform_grid(radius, spacing);

    std::vector<double> sups(static_cast<std::size_t>(n_max) + 1, 0.0);
    hermite_sweep(std::span<const double>(grid), n_max, [&](int k, std::span<const double> v) {
        double s = 0.0;
        for (double value : v) s = std::max(s, std::fabs(value));
        sups[static_cast<std::size_t>(k)] = s;
    });
    return sups;
}

// ---------------------------------------------------------------------------

CoefficientRule power_law_rule(double kappa, double c0, double amplitude) {
    CoefficientRule rule;
    rule.kind = CoefficientRule::Kind::power_law;
    rule.kappa = kappa;
    rule.c0 = c0;
    rule.amplitude = amplitude;
    return rule;
}

CoefficientRule bucket_power_rule(double power, double log_power, double amplitude) {
    CoefficientRule rule;
    rule.kind = CoefficientRule::Kind::bucket_power;
    rule.power = power;
    rule.log_power = log_power;
    rule.amplitude = amplitude;
    return rule;
}

CoefficientRule dyadic_block_rule(double mu, double nu, double gamma) {
    CoefficientRule rule;
    rule.kind = CoefficientRule::Kind::dyadic_block;
    rule.mu = mu;
    rule.nu = nu;
    rule.gamma = gamma;
    return rule;
}

CoefficientRule explicit_rule(std::vector<double> values) {
    CoefficientRule rule;
    rule.kind = CoefficientRule::Kind::explicit_list;
    rule.explicit_values = std::move(values);
    return rule;
}

double CoefficientRule::value_sq(std::int64_t n, std::int64_t j) const {
    switch (kind) {
        case Kind::power_law: {
            if (n == 0) {
                const double v = amplitude * c0;
                return v * v;
            }
            return amplitude * amplitude * std::pow(static_cast<double>(n), -2.0 * kappa);
        }
        case Kind::bucket_power: {
            const double jj = static_cast<double>(std::max<std::int64_t>(j, 1));
            const double lj = std::log(static_cast<double>(std::max<std::int64_t>(j, 2)));
            return amplitude * amplitude * std::pow(jj, power) * std::pow(lj, log_power);
        }
        case Kind::dyadic_block: {
            const double jj = static_cast<double>(std::max<std::int64_t>(j, 1));
            const double K = std::floor(std::log2(jj));
            const double kfac = std::pow(std::max(K, 1.0), 2.0 * nu);
            return std::exp2((-gamma - mu) * K - K) * kfac;
        }
        case Kind::explicit_list: {
            if (n < 0 || n >= static_cast<std::int64_t>(explicit_values.size())) return 0.0;
            const double v = explicit_values[static_cast<std::size_t>(n)];
            return v * v;
        }
    }
    return 0.0;
}

double CoefficientRule::value(std::int64_t n, std::int64_t j) const {
    if (kind == Kind::explicit_list) {
        if (n < 0 || n >= static_cast<std::int64_t>(explicit_values.size())) return 0.0;
        return explicit_values[static_cast<std::size_t>(n)];
    }
    return std::sqrt(value_sq(n, j));
}

double CoefficientRule::bucket_max_sq(std::int64_t j, int d) const {
    const Bucket bucket = make_bucket(j, d);
    if (bucket.level < 0 || bucket.count == 0) return 0.0;
    switch (kind) {
        case Kind::power_law: {
            // n^{-2 kappa} is monotone in n, so the extremes sit at the ends;
            // n = 1 can beat both when the bucket starts at the c0 mode
            double best = std::max(value_sq(bucket.first_mode, j),
                                   value_sq(bucket.first_mode + bucket.count - 1, j));
            if (bucket.first_mode == 0 && bucket.count > 1) best = std::max(best, value_sq(1, j));
            return best;
        }
        case Kind::bucket_power:
        case Kind::dyadic_block:
            return value_sq(bucket.first_mode, j);
        case Kind::explicit_list: {
            double best = 0.0;
            for (std::int64_t n = bucket.first_mode; n < bucket.first_mode + bucket.count; ++n) {
                best = std::max(best, value_sq(n, j));
            }
            return best;
        }
    }
    return 0.0;
}

double CoefficientRule::bucket_min_sq(std::int64_t j, int d) const {
    const Bucket bucket = make_bucket(j, d);
    if (bucket.level < 0 || bucket.count == 0) return 0.0;
    switch (kind) {
        case Kind::power_law: {
            double worst = std::min(value_sq(bucket.first_mode, j),
                                    value_sq(bucket.first_mode + bucket.count - 1, j));
            if (bucket.first_mode == 0 && bucket.count > 1) worst = std::min(worst, value_sq(1, j));
            return worst;
        }
        case Kind::bucket_power:
        case Kind::dyadic_block:
            return value_sq(bucket.first_mode, j);
        case Kind::explicit_list: {
            double worst = std::numeric_limits<double>::infinity();
            for (std::int64_t n = bucket.first_mode; n < bucket.first_mode + bucket.count; ++n) {
                worst = std::min(worst, value_sq(n, j));
            }
            return worst;
        }
    }
    return 0.0;
}

double CoefficientRule::bucket_sum_sq(std::int64_t j, int d) const {
    const Bucket bucket = make_bucket(j, d);
    if (bucket.level < 0 || bucket.count == 0) return 0.0;
    if (kind == Kind::bucket_power || kind == Kind::dyadic_block) {
        return static_cast<double>(bucket.count) * value_sq(bucket.first_mode, j);
    }
    double sum = 0.0;
    for (std::int64_t n = bucket.first_mode; n < bucket.first_mode + bucket.count; ++n) {
        sum += value_sq(n, j);
    }
    return sum;
}

double hs_norm(const CoefficientRule& rule, double s, int d, std::int64_t n_max) {
    if (n_max < 0) throw DomainError("hs_norm: n_max must be >= 0");
    double sum = 0.0;
    for (int m = 0;; ++m) {
        const std::int64_t first = binomial(m + d - 1, d);
        if (first > n_max) break;
        const std::int64_t count = binomial(m + d - 1, d - 1);
        const double lambda = 2.0 * m + d;
        const double weight = std::pow(lambda, s);
        const std::int64_t j = (2 * m + d) / 2;
        const std::int64_t last = std::min(first + count - 1, n_max);
        for (std::int64_t n = first; n <= last; ++n) {
            sum += weight * rule.value_sq(n, j);
        }
    }
    return std::sqrt(sum);
}

double zs_norm(const CoefficientRule& rule, double s, int d, std::int64_t j_max) {
    if (j_max < 1) throw DomainError("zs_norm: j_max must be >= 1");
    double sum = 0.0;
    for (std::int64_t j = 1; j <= j_max; ++j) {
        const double max_sq = rule.bucket_max_sq(j, d);
        if (max_sq == 0.0) continue;
        sum += std::pow(static_cast<double>(j), s + d - 1) * max_sq;
    }
    return std::sqrt(sum);
}

namespace {

// Weight (ln j)^alpha with the j = 1 term regularized: zero for positive
// alpha (matching the literal ln 1 = 0), the j = 2 value for negative alpha.
double log_weight(std::int64_t j, double alpha) {
    if (alpha == 0.0) return 1.0;
    if (j >= 2) return std::pow(std::log(static_cast<double>(j)), alpha);
    return alpha > 0.0 ? 0.0 : std::pow(std::log(2.0), alpha);
}

// Fitted log-log slope over the last decade of the (x, y) sequence; the
// fallback reports convergence when the tail carries no mass at all.
struct TailVerdict {
    double slope = 0.0;
    bool fitted = false;
};

TailVerdict tail_slope_last_decade(const std::vector<std::pair<double, double>>& points) {
    if (points.empty()) return {};
    const double x_max = points.back().first;
    const double x_min = std::max(points.front().first, x_max / 10.0);
    std::vector<std::pair<double, double>> window;
    for (const auto& pt : points) {
        if (pt.first >= x_min && pt.second > 0.0) window.push_back(pt);
    }
    if (window.size() < 5) return {};
    const RateFit fit = fit_rate(std::span<const std::pair<double, double>>(window),
                                 window.front().first, window.back().first);
    return {fit.slope, true};
}

} // namespace

ConditionReport check_condition(const CoefficientRule& rule, const ConditionQuery& query,
                                int d, std::int64_t j_budget) {
    if (j_budget < 8) throw DomainError("check_condition: j_budget must be >= 8");
    const SpectralLayout layout = make_layout(d);
    ConditionReport report;

    switch (query.kind) {
        case ConditionKind::bucket_max_vs_mean:
        case ConditionKind::bucket_comparable: {
            const bool two_sided = (query.kind == ConditionKind::bucket_comparable);
            std::vector<std::pair<double, double>> up_ratios, down_ratios;
            report.lower_constant = std::numeric_limits<double>::infinity();
            bool zero_min_seen = false;
            for (std::int64_t j = 1; j <= j_budget; ++j) {
                const Bucket bucket = make_bucket(j, d);
                if (bucket.level < 0 || bucket.count == 0) continue;
                const double mean = rule.bucket_sum_sq(j, d) / static_cast<double>(bucket.count);
                if (mean == 0.0) continue;
                const double up = rule.bucket_max_sq(j, d) / mean;
                up_ratios.emplace_back(static_cast<double>(j), up);
                if (up > report.upper_constant) {
                    report.upper_constant = up;
                    report.witness_j = j;
                }
                if (two_sided) {
                    const double min_sq = rule.bucket_min_sq(j, d);
                    if (min_sq == 0.0) {
                        zero_min_seen = true;
                        report.lower_constant = 0.0;
                        continue;
                    }
                    const double down = min_sq / mean;
                    report.lower_constant = std::min(report.lower_constant, down);
                    down_ratios.emplace_back(static_cast<double>(j), mean / min_sq);
                }
            }
            if (up_ratios.empty()) {
                report.holds = true; // vacuous: no populated bucket
                report.lower_constant = 0.0;
                return report;
            }
            const TailVerdict up_tail = tail_slope_last_decade(up_ratios);
            report.tail_slope = up_tail.slope;
            bool bounded = up_tail.fitted ? (up_tail.slope < 0.05) : true;
            if (two_sided) {
                const TailVerdict down_tail = tail_slope_last_decade(down_ratios);
                const bool down_ok =
                    !zero_min_seen && (down_tail.fitted ? (down_tail.slope < 0.05) : true);
                bounded = bounded && down_ok;
                if (!std::isfinite(report.lower_constant)) report.lower_constant = 0.0;
            }
            report.holds = bounded;
            return report;
        }

        case ConditionKind::lp_weighted_sum:
        case ConditionKind::log_weighted_sum: {
            std::vector<std::pair<double, double>> terms;
            double total = 0.0;
            report.partial_sums.reserve(static_cast<std::size_t>(j_budget));
            for (std::int64_t j = 1; j <= j_budget; ++j) {
                double weight;
                if (query.kind == ConditionKind::lp_weighted_sum) {
                    weight = std::pow(static_cast<double>(j),
                                      layout.gamma + 2.0 * layout.beta / query.p);
                } else {
                    weight = std::pow(static_cast<double>(j), layout.gamma) *
                             log_weight(j, query.alpha);
                }
                const double term = weight * rule.bucket_max_sq(j, d);
                total += term;
                report.partial_sums.push_back(total);
                terms.emplace_back(static_cast<double>(j), term);
            }
            const TailVerdict tail = tail_slope_last_decade(terms);
            if (tail.fitted) {
                report.tail_slope = tail.slope;
                report.holds = tail.slope < -1.05;
            } else {
                // tail essentially empty: summable iff the last decade adds
                // nothing relative to the total
                const double at_tenth =
                    report.partial_sums[static_cast<std::size_t>(j_budget / 10)];
                report.tail_slope = -1e9;
                report.holds = (total == 0.0) || (total - at_tenth <= 1e-9 * total);
            }
            report.upper_constant = total;
            return report;
        }

        case ConditionKind::block_decay: {
            std::vector<std::pair<double, double>> constants;
            for (std::int64_t start = 1; 2 * start - 1 <= j_budget; start *= 2) {
                const double K = std::log2(static_cast<double>(start));
                double block_sum = 0.0;
                for (std::int64_t j = start; j < 2 * start; ++j) {
                    block_sum += rule.bucket_max_sq(j, d);
                }
                const double budget_k = std::exp2((-layout.gamma - query.mu) * K) *
                                        std::pow(std::max(K, 1.0), 2.0 * query.nu);
                const double c_k = block_sum / budget_k;
                report.partial_sums.push_back(c_k);
                constants.emplace_back(static_cast<double>(start), c_k);
                if (c_k > report.upper_constant) {
                    report.upper_constant = c_k;
                    report.witness_j = start;
                }
            }
            // growth detection over the later blocks; the abscissas are
            // geometric so a plain last-decade window would starve the fit
            std::size_t first = constants.size() - std::min<std::size_t>(constants.size(),
                                                                         std::max<std::size_t>(5, constants.size() / 2));
            std::vector<std::pair<double, double>> window;
            for (std::size_t i = first; i < constants.size(); ++i) {
                if (constants[i].second > 0.0) window.push_back(constants[i]);
            }
            if (window.size() >= 5) {
                const RateFit fit = fit_rate(std::span<const std::pair<double, double>>(window),
                                             window.front().first, window.back().first);
                report.tail_slope = fit.slope;
                report.holds = fit.slope < 0.05;
            } else {
                report.tail_slope = 0.0;
                report.holds = true; // too few populated blocks to detect growth
            }
            return report;
        }
    }
    throw DomainError("check_condition: unknown condition kind");
}

} // namespace herm
