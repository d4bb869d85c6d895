#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "herm/radial.hpp"
#include "herm/sampling.hpp"
#include "oracles.hpp"

using namespace herm;

namespace {

std::vector<double> uniform_grid(double lo, double hi, double spacing) {
    std::vector<double> grid;
    for (double x = lo; x <= hi + spacing * 0.5; x += spacing) grid.push_back(x);
    return grid;
}

} // namespace

TEST_SUITE("sampling") {

TEST_CASE("evaluation is bitwise identical across thread counts") {
    const CoefficientRule rule = power_law_rule(0.6);
    const RandomLaw law = gaussian_law();
    const std::vector<double> grid = uniform_grid(-6.0, 6.0, 0.01);
    const FieldSample one = sample_partial_sum(rule, law, 301.0, 1, SeriesMode::one_d,
                                               grid, 12345, 1);
    const FieldSample four = sample_partial_sum(rule, law, 301.0, 1, SeriesMode::one_d,
                                                grid, 12345, 4);
    REQUIRE(one.values.size() == four.values.size());
    for (std::size_t i = 0; i < one.values.size(); ++i) {
        CHECK(one.values[i] == four.values[i]); // exact, not approximate
    }
    CHECK(one.grid_spacing == doctest::Approx(0.01));
}

TEST_CASE("doubling the amplitude doubles the field exactly") {
    const RandomLaw law = rademacher_law();
    const std::vector<double> grid = uniform_grid(-3.0, 3.0, 0.05);
    const FieldSample base = sample_partial_sum(power_law_rule(0.5, 1.0, 1.0), law, 41.0, 1,
                                                SeriesMode::one_d, grid, 9, 1);
    const FieldSample twice = sample_partial_sum(power_law_rule(0.5, 1.0, 2.0), law, 41.0, 1,
                                                 SeriesMode::one_d, grid, 9, 1);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(twice.values[i] == 2.0 * base.values[i]); // scaling by 2 is exact in binary
    }
}

TEST_CASE("single-mode field reproduces the ground state profile") {
    const CoefficientRule delta = explicit_rule({1.0});
    const RandomLaw law = rademacher_law();
    const std::vector<double> grid = uniform_grid(-4.0, 4.0, 0.001);
    const FieldSample sample = sample_partial_sum(delta, law, 1.0, 1, SeriesMode::one_d,
                                                  grid, 77, 1);
    // |u| = |h_0|, whose sup is pi^{-1/4} at the origin
    CHECK(sup_norm(sample) == doctest::Approx(0.75112554446494248).epsilon(1e-6));
    const double x = grid[100];
    const double expected = noise_entry(law, 77, 0) * static_cast<double>(oracle::hermite_fn(0, x));
    CHECK(sample.values[100] == doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("zero coefficients give the zero field") {
    const CoefficientRule zero = explicit_rule({0.0, 0.0, 0.0});
    const std::vector<double> grid = uniform_grid(-2.0, 2.0, 0.1);
    const FieldSample sample = sample_partial_sum(zero, gaussian_law(), 5.0, 1,
                                                  SeriesMode::one_d, grid, 1, 1);
    CHECK(sup_norm(sample) == 0.0);
}

TEST_CASE("pointwise variance matches the coefficient sums") {
    // 11 modes below lambda = 21; E u(x)^2 = sum c_n^2 h_n(x)^2
    const CoefficientRule rule = power_law_rule(0.4);
    const RandomLaw law = gaussian_law();
    const std::vector<double> grid = {0.3};
    const int trials = 4000;
    double sum_sq = 0.0;
    for (int t = 0; t < trials; ++t) {
        const FieldSample s = sample_partial_sum(rule, law, 21.0, 1, SeriesMode::one_d,
                                                 grid, mix_seed(5, t), 1);
        sum_sq += s.values[0] * s.values[0];
    }
    double expected = 0.0;
    for (int n = 0; n <= 10; ++n) {
        const double c = rule.value(n, n);
        const auto h = static_cast<double>(oracle::hermite_fn(n, 0.3L));
        expected += c * c * h * h;
    }
    CHECK(sum_sq / trials == doctest::Approx(expected).epsilon(0.1));
}

TEST_CASE("radial and tensor fields agree with hand-built sums") {
    const RandomLaw law = gaussian_law();
    const CoefficientRule rule = power_law_rule(0.3);

    // radial d = 3, lambda = 23: modes n with 4n + 3 <= 23, i.e. n <= 5
    const std::vector<double> radii = {0.0, 0.8, 2.1};
    const FieldSample rad = sample_partial_sum(rule, law, 23.0, 3, SeriesMode::radial,
                                               radii, 31, 1);
    for (std::size_t i = 0; i < radii.size(); ++i) {
        double expected = 0.0;
        for (std::int64_t n = 0; n <= 5; ++n) {
            expected += rule.value(n, radial_bucket_of(n, 3)) * noise_entry(law, 31, n) *
                        radial_hermite(static_cast<int>(n), 3, radii[i]);
        }
        CHECK(rad.values[i] == doctest::Approx(expected).epsilon(1e-12));
    }

    // tensor d = 2, lambda = 8: levels m <= 3, 10 modes in sorted order
    const std::vector<double> pts = {0.4, -0.9, 0.0, 0.0, 1.3, 0.7};
    const FieldSample ten = sample_partial_sum(rule, law, 8.0, 2, SeriesMode::tensor,
                                               pts, 11, 1);
    for (std::size_t p = 0; p < 3; ++p) {
        double expected = 0.0;
        std::int64_t n = 0;
        for (int m = 0; m <= 3; ++m) {
            const std::int64_t j = (2 * m + 2) / 2;
            for (const auto& alpha : bucket_members(j, 2)) {
                const double phi =
                    static_cast<double>(oracle::hermite_fn(alpha[0], pts[2 * p]) *
                                        oracle::hermite_fn(alpha[1], pts[2 * p + 1]));
                expected += rule.value(n, j) * noise_entry(law, 11, n) * phi;
                ++n;
            }
        }
        CHECK(ten.values[p] == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("mode and argument validation") {
    const CoefficientRule rule = power_law_rule(0.5);
    const RandomLaw law = gaussian_law();
    const std::vector<double> grid = {0.0, 1.0};
    CHECK_THROWS_AS(sample_partial_sum(rule, law, 9.0, 2, SeriesMode::one_d, grid, 1, 1),
                    DomainError);
    CHECK_THROWS_AS(sample_partial_sum(rule, law, 9.0, 1, SeriesMode::radial, grid, 1, 1),
                    DomainError);
    CHECK_THROWS_AS(sample_partial_sum(rule, law, 9.0, 4, SeriesMode::tensor,
                                       std::vector<double>(8, 0.0), 1, 1),
                    BudgetExceeded);
    // tensor grids must be d-tuples
    CHECK_THROWS_AS(sample_partial_sum(rule, law, 9.0, 2, SeriesMode::tensor,
                                       std::vector<double>(5, 0.0), 1, 1),
                    DomainError);
    // budget cap: lambda = 4001 needs 2001 one-d modes
    CHECK_THROWS_AS(sample_partial_sum(rule, law, 4001.0, 1, SeriesMode::one_d, grid, 1, 1, 100),
                    BudgetExceeded);
}

TEST_CASE("grid refinement moves the sup estimate by little") {
    const CoefficientRule rule = power_law_rule(0.5);
    const RandomLaw law = gaussian_law();
    const double lambda = 201.0;
    const double coarse_h = 0.05 / std::sqrt(lambda);
    const double reach = std::sqrt(lambda) + 3.0;
    const FieldSample coarse = sample_partial_sum(rule, law, lambda, 1, SeriesMode::one_d,
                                                  uniform_grid(-reach, reach, coarse_h), 2, 1);
    const FieldSample fine = sample_partial_sum(rule, law, lambda, 1, SeriesMode::one_d,
                                                uniform_grid(-reach, reach, coarse_h / 4.0), 2, 1);
    CHECK(sup_norm(fine) >= sup_norm(coarse) * (1.0 - 1e-12));
    CHECK(sup_norm(fine) - sup_norm(coarse) < 0.01 * sup_norm(fine));
}

TEST_CASE("modulus of continuity is monotone and doubling-controlled") {
    const CoefficientRule rule = power_law_rule(0.5);
    const FieldSample sample = sample_partial_sum(rule, gaussian_law(), 101.0, 1,
                                                  SeriesMode::one_d,
                                                  uniform_grid(-8.0, 8.0, 0.002), 8, 1);
    const std::vector<double> hs = {0.01, 0.02, 0.04, 0.08, 0.16};
    const std::vector<double> m = modulus_of_continuity(sample, hs);
    for (std::size_t i = 1; i < m.size(); ++i) {
        CHECK(m[i] >= m[i - 1]);                 // monotone in h
        CHECK(m[i] <= 2.0 * m[i - 1] * (1.0 + 1e-12)); // m(2h) <= 2 m(h)
    }
    CHECK(m.back() <= 2.0 * sup_norm(sample));
    CHECK_THROWS_AS(modulus_of_continuity(sample, std::vector<double>{0.003}), HTooSmall);
}

TEST_CASE("modulus reduces to the derivative for a smooth single mode") {
    const CoefficientRule delta = explicit_rule({1.0});
    const FieldSample sample = sample_partial_sum(delta, rademacher_law(), 1.0, 1,
                                                  SeriesMode::one_d,
                                                  uniform_grid(-4.0, 4.0, 0.0005), 3, 1);
    const std::vector<double> hs = {0.002, 0.004};
    const std::vector<double> m = modulus_of_continuity(sample, hs);
    // max |h_0'| = pi^{-1/4} e^{-1/2} at t = 1
    const double grad = 0.75112554446494248 * std::exp(-0.5);
    CHECK(m[0] == doctest::Approx(grad * 0.002).epsilon(0.02));
    CHECK(m[1] == doctest::Approx(grad * 0.004).epsilon(0.02));
}

TEST_CASE("irregular grids fall back to the pair scan") {
    const CoefficientRule rule = power_law_rule(0.4);
    const std::vector<double> grid = {0.0, 0.1, 0.35, 0.36};
    const FieldSample sample = sample_partial_sum(rule, gaussian_law(), 11.0, 1,
                                                  SeriesMode::one_d, grid, 21, 1);
    CHECK(sample.grid_spacing == 0.0); // not uniform
    const std::vector<double> m = modulus_of_continuity(sample, std::vector<double>{0.011});
    CHECK(m[0] == doctest::Approx(std::fabs(sample.values[3] - sample.values[2])).epsilon(1e-14));
}

TEST_CASE("bernstein probe sits near the half-power law") {
    const std::vector<double> lambdas = {64.0, 128.0, 256.0, 512.0, 1024.0};
    const RateFit fit = bernstein_probe(1, lambdas, 3, 4);
    CHECK(fit.slope > 0.35);
    CHECK(fit.slope < 0.65);
    CHECK(fit.pairs.size() == lambdas.size());
}

TEST_CASE("salem-zygmund sweep reports ordered quantiles and exact rho sums") {
    const CoefficientRule rule = bucket_power_rule(-1.2);
    const RandomLaw law = gaussian_law();
    const std::vector<double> lambdas = {32.0, 64.0};
    const SalemZygmundReport rep = salem_zygmund_experiment(rule, law, 1, lambdas, 16, 6,
                                                            SeriesMode::one_d, 2);
    REQUIRE(rep.lambdas.size() == 2);
    const double gamma = make_layout(1).gamma;
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(rep.sup_quantiles[i][0] <= rep.sup_quantiles[i][1]);
        CHECK(rep.sup_quantiles[i][1] <= rep.sup_quantiles[i][2]);
        double rho = 0.0;
        for (std::int64_t j = 1; j <= static_cast<std::int64_t>(lambdas[i] / 2.0); ++j) {
            rho += std::pow(static_cast<double>(j), gamma) * rule.value_sq(j, j);
        }
        CHECK(rep.rho[i] == doctest::Approx(rho).epsilon(1e-12));
        CHECK(rep.rho_full[i] > rep.rho[i]); // longer sum, positive terms
    }
    // quantiles grow with lambda for this slowly decaying rule
    CHECK(rep.sup_quantiles[1][2] > 0.0);
}

TEST_CASE("block sup norms are reproducible and start at the first bucket") {
    const CoefficientRule rule = bucket_power_rule(-0.9);
    const RandomLaw law = gaussian_law();
    const std::vector<double> a = block_sup_norms(rule, law, 1, 5, 13, SeriesMode::one_d, 0.25, 1);
    const std::vector<double> b = block_sup_norms(rule, law, 1, 5, 13, SeriesMode::one_d, 0.25, 3);
    REQUIRE(a.size() == 6);
    for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(a[k] == b[k]); // thread-count independent, bitwise
        CHECK(a[k] > 0.0);
    }
}

} // TEST_SUITE("sampling")
