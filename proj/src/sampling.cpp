#include "herm/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "herm/hermite.hpp"
#include "herm/parallel.hpp"
#include "herm/radial.hpp"

namespace herm {

namespace {

std::int64_t mode_count(double lambda, int d, SeriesMode mode) {
    switch (mode) {
        case SeriesMode::one_d:
            return lambda >= 1.0 ? static_cast<std::int64_t>(std::floor((lambda - 1.0) / 2.0)) + 1 : 0;
        case SeriesMode::radial:
            return lambda >= d ? static_cast<std::int64_t>(std::floor((lambda - d) / 4.0)) + 1 : 0;
        case SeriesMode::tensor: {
            if (lambda < d) return 0;
            const int m_max = static_cast<int>(std::floor((lambda - d) / 2.0));
            return binomial(m_max + d, d);
        }
    }
    return 0;
}

std::int64_t series_bucket_of(std::int64_t n, int d, SeriesMode mode) {
    switch (mode) {
        case SeriesMode::one_d:
            return n; // eigenvalue 2n + 1 lands in [2n, 2n + 2)
        case SeriesMode::radial:
            return radial_bucket_of(n, d);
        case SeriesMode::tensor:
            return bucket_of(n, d);
    }
    return 0;
}

// |c_n|^2 of the single series mode in bucket j, or 0 when the bucket holds
// none. Both 1-D and radial series have at most one mode per bucket.
double series_bucket_max_sq(const CoefficientRule& rule, std::int64_t j, int d,
                            SeriesMode mode) {
    if (mode == SeriesMode::one_d) return j >= 0 ? rule.value_sq(j, j) : 0.0;
    for (std::int64_t num : {2 * j - d, 2 * j + 1 - d}) {
        if (num >= 0 && num % 4 == 0) return rule.value_sq(num / 4, j);
    }
    return 0.0;
}

std::vector<double> series_coefficients(const CoefficientRule& rule, std::int64_t count,
                                        int d, SeriesMode mode) {
    std::vector<double> c(static_cast<std::size_t>(count));
    if (mode == SeriesMode::tensor) {
        std::int64_t n = 0;
        for (int m = 0; n < count; ++m) {
            const std::int64_t level_count = binomial(m + d - 1, d - 1);
            const std::int64_t j = (2 * m + d) / 2;
            for (std::int64_t i = 0; i < level_count && n < count; ++i, ++n) {
                c[static_cast<std::size_t>(n)] = rule.value(n, j);
            }
        }
        return c;
    }
    for (std::int64_t n = 0; n < count; ++n) {
        c[static_cast<std::size_t>(n)] = rule.value(n, series_bucket_of(n, d, mode));
    }
    return c;
}

double detect_uniform_spacing(std::span<const double> grid) {
    if (grid.size() < 2) return 0.0;
    const double h = grid[1] - grid[0];
    if (!(h > 0.0)) return 0.0;
    for (std::size_t g = 1; g + 1 < grid.size(); ++g) {
        if (std::fabs(grid[g + 1] - grid[g] - h) > 1e-9 * h) return 0.0;
    }
    return h;
}

// Accumulates sum_k coeff[k] * basis_k(x_g) over a grid chunk by one
// streaming recurrence pass; used by every non-tensor evaluation path.
void accumulate_series(int d, SeriesMode mode, std::span<const double> points,
                       std::span<const double> coeff, std::span<double> acc) {
    const int n_max = static_cast<int>(coeff.size()) - 1;
    auto consume = [&](int k, std::span<const double> v) {
        const double c = coeff[static_cast<std::size_t>(k)];
        if (c == 0.0) return;
        for (std::size_t g = 0; g < points.size(); ++g) acc[g] += c * v[g];
    };
    if (mode == SeriesMode::one_d) {
        hermite_sweep(points, n_max, consume);
    } else {
        radial_sweep_all(d, n_max, points, consume);
    }
}

} // namespace

FieldSample sample_partial_sum(const CoefficientRule& rule, const RandomLaw& law,
                               double lambda, int d, SeriesMode mode,
                               std::span<const double> grid, std::uint64_t seed,
                               int threads, std::int64_t mode_budget) {
    if (mode == SeriesMode::one_d && d != 1) throw DomainError("sample_partial_sum: one_d needs d = 1");
    if (mode == SeriesMode::radial && d < 2) throw DomainError("sample_partial_sum: radial needs d >= 2");
    if (mode == SeriesMode::tensor && d > 3) throw BudgetExceeded("sample_partial_sum: tensor d > 3");
    if (mode == SeriesMode::tensor && grid.size() % static_cast<std::size_t>(d) != 0) {
        throw DomainError("sample_partial_sum: tensor grid must hold d-tuples");
    }

    FieldSample sample;
    sample.lambda = lambda;
    sample.seed = seed;
    sample.d = d;
    sample.mode = mode;
    sample.grid.assign(grid.begin(), grid.end());
    sample.grid_spacing = (mode == SeriesMode::tensor) ? 0.0 : detect_uniform_spacing(grid);

    const std::int64_t count = mode_count(lambda, d, mode);
    if (count > mode_budget) throw BudgetExceeded("sample_partial_sum: mode count over budget");
    const std::size_t n_points =
        (mode == SeriesMode::tensor) ? grid.size() / static_cast<std::size_t>(d) : grid.size();
    sample.values.assign(n_points, 0.0);
    if (count == 0) return sample;

    std::vector<double> coeff = series_coefficients(rule, count, d, mode);
    for (std::int64_t n = 0; n < count; ++n) {
        coeff[static_cast<std::size_t>(n)] *= noise_entry(law, seed, static_cast<std::uint64_t>(n));
    }

    if (mode == SeriesMode::tensor) {
        // flat member table, level by level, matching the sorted mode order
        const int m_max = static_cast<int>(std::floor((lambda - d) / 2.0));
        std::vector<int> members;
        members.reserve(static_cast<std::size_t>(count * d));
        for (int m = 0; m <= m_max; ++m) {
            for (const std::vector<int>& alpha : bucket_members((2 * m + d) / 2, d)) {
                members.insert(members.end(), alpha.begin(), alpha.end());
            }
        }
        parallel_chunks(static_cast<std::int64_t>(n_points), threads,
                        [&](std::int64_t, std::int64_t begin, std::int64_t end) {
                            for (std::int64_t p = begin; p < end; ++p) {
                                const double* x = grid.data() + p * d;
                                std::vector<HermiteBatch> batches;
                                batches.reserve(static_cast<std::size_t>(d));
                                for (int i = 0; i < d; ++i) batches.push_back(hermite_batch(x[i], m_max));
                                double acc = 0.0;
                                for (std::int64_t n = 0; n < count; ++n) {
                                    const double c = coeff[static_cast<std::size_t>(n)];
                                    if (c == 0.0) continue;
                                    double prod = c;
                                    const int* alpha = members.data() + n * d;
                                    for (int i = 0; i < d; ++i) {
                                        prod *= batches[static_cast<std::size_t>(i)]
                                                    .values[static_cast<std::size_t>(alpha[i])];
                                    }
                                    acc += prod;
                                }
                                sample.values[static_cast<std::size_t>(p)] = acc;
                            }
                        });
        return sample;
    }

    parallel_chunks(static_cast<std::int64_t>(n_points), threads,
                    [&](std::int64_t, std::int64_t begin, std::int64_t end) {
                        accumulate_series(d, mode,
                                          grid.subspan(static_cast<std::size_t>(begin),
                                                       static_cast<std::size_t>(end - begin)),
                                          coeff,
                                          std::span<double>(sample.values)
                                              .subspan(static_cast<std::size_t>(begin),
                                                       static_cast<std::size_t>(end - begin)));
                    });
    return sample;
}

double sup_norm(const FieldSample& sample) {
    double sup = 0.0;
    for (double v : sample.values) sup = std::max(sup, std::fabs(v));
    return sup;
}

namespace {

// max over index windows of length w+1 of (window max - window min), by the
// classic pair of monotone deques
double max_range_in_windows(const std::vector<double>& u, std::size_t w) {
    std::deque<std::size_t> hi, lo;
    double best = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        while (!hi.empty() && u[hi.back()] <= u[i]) hi.pop_back();
        hi.push_back(i);
        while (!lo.empty() && u[lo.back()] >= u[i]) lo.pop_back();
        lo.push_back(i);
        if (i >= w + 1) {
            if (hi.front() == i - w - 1) hi.pop_front();
            if (lo.front() == i - w - 1) lo.pop_front();
        }
        if (i >= w) best = std::max(best, u[hi.front()] - u[lo.front()]);
    }
    return best;
}

} // namespace

std::vector<double> modulus_of_continuity(const FieldSample& sample,
                                          std::span<const double> h_list) {
    std::vector<double> out;
    out.reserve(h_list.size());

    if (sample.mode != SeriesMode::tensor && sample.grid_spacing > 0.0) {
        const double spacing = sample.grid_spacing;
        for (double h : h_list) {
            if (h < 2.0 * spacing) throw HTooSmall("modulus_of_continuity: h below grid resolution");
            const auto w = static_cast<std::size_t>(std::floor(h / spacing * (1.0 + 1e-12)));
            out.push_back(max_range_in_windows(sample.values, w));
        }
        return out;
    }

    // irregular or tensor grid: quadratic pair scan
    const int d = (sample.mode == SeriesMode::tensor) ? sample.d : 1;
    const std::size_t n_points = sample.values.size();
    for (double h : h_list) {
        double best = 0.0;
        for (std::size_t p = 0; p < n_points; ++p) {
            for (std::size_t q = p + 1; q < n_points; ++q) {
                double dist_sq = 0.0;
                for (int i = 0; i < d; ++i) {
                    const double diff = sample.grid[p * d + i] - sample.grid[q * d + i];
                    dist_sq += diff * diff;
                }
                if (dist_sq <= h * h) {
                    best = std::max(best, std::fabs(sample.values[p] - sample.values[q]));
                }
            }
        }
        out.push_back(best);
    }
    return out;
}

namespace {

std::vector<double> symmetric_grid(double radius, double spacing) {
    const auto half = static_cast<std::int64_t>(std::ceil(radius / spacing));
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(2 * half + 1));
    for (std::int64_t i = -half; i <= half; ++i) grid.push_back(spacing * static_cast<double>(i));
    return grid;
}

std::vector<double> ray_grid(double radius, double spacing) {
    const auto count = static_cast<std::size_t>(std::ceil(radius / spacing)) + 1;
    std::vector<double> grid(count);
    for (std::size_t g = 0; g < count; ++g) grid[g] = spacing * static_cast<double>(g);
    return grid;
}

} // namespace

RateFit bernstein_probe(int d, std::span<const double> lambda_list, int trials,
                        std::uint64_t seed) {
    if (d < 1) throw DomainError("bernstein_probe: d must be >= 1");
    if (trials < 1) throw DomainError("bernstein_probe: trials must be >= 1");
    const RandomLaw law = gaussian_law();
    std::vector<double> lambdas(lambda_list.begin(), lambda_list.end());
    std::sort(lambdas.begin(), lambdas.end());

    std::vector<std::pair<double, double>> points;
    for (double lambda : lambdas) {
        const SeriesMode mode = (d == 1) ? SeriesMode::one_d : SeriesMode::radial;
        const std::int64_t count = mode_count(lambda, d, mode);
        if (count < 2) throw DomainError("bernstein_probe: lambda admits too few modes");
        const double radius = std::sqrt(lambda) + 3.0 * std::pow(lambda, 1.0 / 6.0);
        const double spacing = 0.5 / std::sqrt(lambda);

        double log_ratio_sum = 0.0;
        for (int t = 0; t < trials; ++t) {
            // redraw on the (measure-zero) degenerate draw, advancing the stream
            for (std::uint64_t attempt = 0;; ++attempt) {
                const std::uint64_t stream = mix_seed(seed, static_cast<std::uint64_t>(t) +
                                                                (attempt << 32));
                double sup_u = 0.0, sup_du = 0.0;
                if (d == 1) {
                    std::vector<double> a(static_cast<std::size_t>(count) + 2, 0.0);
                    for (std::int64_t k = 0; k < count; ++k) {
                        a[static_cast<std::size_t>(k)] = noise_entry(law, stream, static_cast<std::uint64_t>(k));
                    }
                    // u' = sum b_k h_k with b_k = (sqrt(k+1) a_{k+1} - sqrt(k) a_{k-1}) / sqrt 2
                    std::vector<double> b(static_cast<std::size_t>(count) + 1, 0.0);
                    for (std::int64_t k = 0; k <= count; ++k) {
                        const double up = std::sqrt(static_cast<double>(k + 1)) * a[static_cast<std::size_t>(k + 1)];
                        const double down = k >= 1 ? std::sqrt(static_cast<double>(k)) * a[static_cast<std::size_t>(k - 1)] : 0.0;
                        b[static_cast<std::size_t>(k)] = (up - down) / std::sqrt(2.0);
                    }
                    const std::vector<double> grid = symmetric_grid(radius, spacing);
                    std::vector<double> acc_u(grid.size(), 0.0), acc_du(grid.size(), 0.0);
                    hermite_sweep(std::span<const double>(grid), static_cast<int>(count),
                                  [&](int k, std::span<const double> v) {
                                      const double ak = k < count ? a[static_cast<std::size_t>(k)] : 0.0;
                                      const double bk = b[static_cast<std::size_t>(k)];
                                      for (std::size_t g = 0; g < grid.size(); ++g) {
                                          acc_u[g] += ak * v[g];
                                          acc_du[g] += bk * v[g];
                                      }
                                  });
                    for (std::size_t g = 0; g < grid.size(); ++g) {
                        sup_u = std::max(sup_u, std::fabs(acc_u[g]));
                        sup_du = std::max(sup_du, std::fabs(acc_du[g]));
                    }
                } else {
                    const std::vector<double> grid = ray_grid(radius, spacing);
                    std::vector<double> acc(grid.size(), 0.0);
                    std::vector<double> coeff(static_cast<std::size_t>(count));
                    for (std::int64_t k = 0; k < count; ++k) {
                        coeff[static_cast<std::size_t>(k)] = noise_entry(law, stream, static_cast<std::uint64_t>(k));
                    }
                    accumulate_series(d, SeriesMode::radial, std::span<const double>(grid),
                                      coeff, std::span<double>(acc));
                    for (double v : acc) sup_u = std::max(sup_u, std::fabs(v));
                    for (std::size_t g = 1; g + 1 < grid.size(); ++g) {
                        sup_du = std::max(sup_du, std::fabs(acc[g + 1] - acc[g - 1]) / (2.0 * spacing));
                    }
                }
                if (sup_u > 0.0) {
                    log_ratio_sum += std::log(sup_du / sup_u);
                    break;
                }
            }
        }
        points.emplace_back(lambda, std::exp(log_ratio_sum / trials));
    }
    return fit_rate(std::span<const std::pair<double, double>>(points),
                    points.front().first, points.back().first);
}

SalemZygmundReport salem_zygmund_experiment(const CoefficientRule& rule, const RandomLaw& law,
                                            int d, std::span<const double> lambda_list,
                                            int trials, std::uint64_t seed,
                                            SeriesMode mode, int threads,
                                            double grid_factor) {
    if (mode == SeriesMode::tensor) throw DomainError("salem_zygmund_experiment: tensor mode unsupported");
    if (lambda_list.empty()) throw DomainError("salem_zygmund_experiment: empty lambda list");
    if (trials < 1) throw DomainError("salem_zygmund_experiment: trials must be >= 1");
    for (std::size_t i = 0; i + 1 < lambda_list.size(); ++i) {
        if (!(lambda_list[i] < lambda_list[i + 1])) {
            throw DomainError("salem_zygmund_experiment: lambda list must ascend");
        }
    }

    SalemZygmundReport report;
    report.lambdas.assign(lambda_list.begin(), lambda_list.end());
    const double lambda_max = report.lambdas.back();
    const std::int64_t count = mode_count(lambda_max, d, mode);
    if (count < 1) throw DomainError("salem_zygmund_experiment: no modes below lambda");

    const std::vector<double> coeff_base = series_coefficients(rule, count, d, mode);

    // cutoff i completes once mode last_mode[i] has been accumulated
    std::vector<std::int64_t> last_mode(report.lambdas.size());
    for (std::size_t i = 0; i < report.lambdas.size(); ++i) {
        last_mode[i] = mode_count(report.lambdas[i], d, mode) - 1;
    }

    const double radius = std::sqrt(lambda_max) + 3.0 * std::pow(lambda_max, 1.0 / 6.0);
    const double spacing = grid_factor / std::sqrt(lambda_max);
    const std::vector<double> grid =
        (mode == SeriesMode::one_d) ? symmetric_grid(radius, spacing) : ray_grid(radius, spacing);

    std::vector<std::vector<double>> sups(report.lambdas.size(),
                                          std::vector<double>(static_cast<std::size_t>(trials), 0.0));
    parallel_chunks(trials, threads, [&](std::int64_t, std::int64_t begin, std::int64_t end) {
        std::vector<double> coeff(coeff_base.size());
        std::vector<double> acc(grid.size());
        for (std::int64_t t = begin; t < end; ++t) {
            const std::uint64_t stream = mix_seed(seed, static_cast<std::uint64_t>(t));
            for (std::int64_t n = 0; n < count; ++n) {
                coeff[static_cast<std::size_t>(n)] =
                    coeff_base[static_cast<std::size_t>(n)] *
                    noise_entry(law, stream, static_cast<std::uint64_t>(n));
            }
            std::fill(acc.begin(), acc.end(), 0.0);
            std::size_t next_cut = 0;
            while (next_cut < last_mode.size() && last_mode[next_cut] < 0) {
                sups[next_cut][static_cast<std::size_t>(t)] = 0.0;
                ++next_cut;
            }
            auto consume = [&](int k, std::span<const double> v) {
                const double c = coeff[static_cast<std::size_t>(k)];
                if (c != 0.0) {
                    for (std::size_t g = 0; g < grid.size(); ++g) acc[g] += c * v[g];
                }
                while (next_cut < last_mode.size() && last_mode[next_cut] == k) {
                    double sup = 0.0;
                    for (double value : acc) sup = std::max(sup, std::fabs(value));
                    sups[next_cut][static_cast<std::size_t>(t)] = sup;
                    ++next_cut;
                }
            };
            if (mode == SeriesMode::one_d) {
                hermite_sweep(std::span<const double>(grid), static_cast<int>(count) - 1, consume);
            } else {
                radial_sweep_all(d, static_cast<int>(count) - 1, std::span<const double>(grid), consume);
            }
        }
    });

    const SpectralLayout layout = make_layout(d);
    auto rho_up_to = [&](std::int64_t j_cut) {
        double sum = 0.0;
        for (std::int64_t j = 1; j <= j_cut; ++j) {
            sum += std::pow(static_cast<double>(j), layout.gamma) *
                   series_bucket_max_sq(rule, j, d, mode);
        }
        return sum;
    };

    const std::array<double, 3> qs = {0.5, 0.9, 0.99};
    for (std::size_t i = 0; i < report.lambdas.size(); ++i) {
        const double lambda = report.lambdas[i];
        report.rho.push_back(rho_up_to(static_cast<std::int64_t>(std::floor(lambda / 2.0))));
        report.rho_full.push_back(rho_up_to(static_cast<std::int64_t>(std::floor(lambda))));

        std::vector<double>& m = sups[i];
        std::sort(m.begin(), m.end());
        std::array<double, 3> quantiles{};
        for (std::size_t q = 0; q < 3; ++q) {
            const double pos = qs[q] * static_cast<double>(trials - 1);
            const auto lo = static_cast<std::size_t>(std::floor(pos));
            const std::size_t hi = std::min(lo + 1, static_cast<std::size_t>(trials - 1));
            const double frac = pos - std::floor(pos);
            quantiles[q] = (1.0 - frac) * m[lo] + frac * m[hi];
        }
        report.sup_quantiles.push_back(quantiles);

        const double norm = std::sqrt(std::log(lambda) * report.rho[i]);
        std::array<double, 3> ratio{};
        for (std::size_t q = 0; q < 3; ++q) {
            ratio[q] = norm > 0.0 ? quantiles[q] / norm : std::numeric_limits<double>::quiet_NaN();
        }
        report.normalized_ratio.push_back(ratio);
    }
    return report;
}

std::vector<double> block_sup_norms(const CoefficientRule& rule, const RandomLaw& law,
                                    int d, int k_max, std::uint64_t seed, SeriesMode mode,
                                    double grid_factor, int threads) {
    if (mode == SeriesMode::tensor) throw DomainError("block_sup_norms: tensor mode unsupported");
    if (k_max < 0) throw DomainError("block_sup_norms: k_max must be >= 0");

    // last mode whose bucket stays below 2^{k_max + 1}
    const std::int64_t j_end = (std::int64_t{1} << (k_max + 1)) - 1;
    std::int64_t count;
    if (mode == SeriesMode::one_d) {
        count = j_end + 1; // modes n = j
    } else {
        count = (2 * j_end + 1 - d) / 4 + 1;
    }

    std::vector<double> coeff = series_coefficients(rule, count, d, mode);
    std::vector<int> block_of(static_cast<std::size_t>(count), -1);
    for (std::int64_t n = 0; n < count; ++n) {
        const std::int64_t j = series_bucket_of(n, d, mode);
        if (j >= 1) {
            block_of[static_cast<std::size_t>(n)] =
                static_cast<int>(std::floor(std::log2(static_cast<double>(j))));
        }
        coeff[static_cast<std::size_t>(n)] *= noise_entry(law, seed, static_cast<std::uint64_t>(n));
    }

    const double lambda_max =
        (mode == SeriesMode::one_d) ? 2.0 * (count - 1) + 1.0 : 4.0 * (count - 1) + d;
    const double radius = std::sqrt(lambda_max) + 3.0 * std::pow(lambda_max, 1.0 / 6.0);
    const double spacing = grid_factor / std::sqrt(lambda_max);
    const std::vector<double> grid =
        (mode == SeriesMode::one_d) ? symmetric_grid(radius, spacing) : ray_grid(radius, spacing);

    constexpr std::int64_t kChunkSlots = 256;
    std::vector<std::vector<double>> chunk_sups(
        kChunkSlots, std::vector<double>(static_cast<std::size_t>(k_max) + 1, 0.0));

    parallel_chunks(static_cast<std::int64_t>(grid.size()), threads,
                    [&](std::int64_t slot, std::int64_t begin, std::int64_t end) {
                        const std::span<const double> pts(grid.data() + begin,
                                                          static_cast<std::size_t>(end - begin));
                        std::vector<double> acc(pts.size(), 0.0);
                        std::vector<double>& sups = chunk_sups[static_cast<std::size_t>(slot)];
                        int current = -1;
                        auto flush = [&]() {
                            if (current >= 0) {
                                double sup = 0.0;
                                for (double v : acc) sup = std::max(sup, std::fabs(v));
                                sups[static_cast<std::size_t>(current)] = sup;
                                std::fill(acc.begin(), acc.end(), 0.0);
                            }
                        };
                        auto consume = [&](int k, std::span<const double> v) {
                            const int b = block_of[static_cast<std::size_t>(k)];
                            if (b != current) {
                                flush();
                                current = b;
                            }
                            if (b < 0) return;
                            const double c = coeff[static_cast<std::size_t>(k)];
                            for (std::size_t g = 0; g < pts.size(); ++g) acc[g] += c * v[g];
                        };
                        if (mode == SeriesMode::one_d) {
                            hermite_sweep(pts, static_cast<int>(count) - 1, consume);
                        } else {
                            radial_sweep_all(d, static_cast<int>(count) - 1, pts, consume);
                        }
                        flush();
                    });

    std::vector<double> block_sups(static_cast<std::size_t>(k_max) + 1, 0.0);
    for (const std::vector<double>& sups : chunk_sups) {
        for (std::size_t k = 0; k < block_sups.size(); ++k) {
            block_sups[k] = std::max(block_sups[k], sups[k]);
        }
    }
    return block_sups;
}

} // namespace herm
