#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "herm/spectral.hpp"
#include "oracles.hpp"

using namespace herm;

namespace {

// Brute-force eigenvalue ordering: level m appears binomial(m+d-1, d-1)
// times, eigenvalue 2m + d. Everything combinatorial is checked against
// this list.
std::vector<int> brute_levels(int d, int level_max) {
    std::vector<int> levels;
    for (int m = 0; m <= level_max; ++m) {
        const std::int64_t mult = binomial(m + d - 1, d - 1);
        for (std::int64_t i = 0; i < mult; ++i) levels.push_back(m);
    }
    return levels;
}

} // namespace

TEST_SUITE("spectral") {

TEST_CASE("layout exponents match the table") {
    CHECK(make_layout(1).gamma == doctest::Approx(-1.0 / 6.0));
    CHECK(make_layout(1).beta == doctest::Approx(1.0 / 6.0));
    CHECK(make_layout(2).gamma == doctest::Approx(0.0));
    CHECK(make_layout(2).beta == doctest::Approx(1.0));
    CHECK(make_layout(3).gamma == doctest::Approx(0.5));
    CHECK(make_layout(3).beta == doctest::Approx(1.5));
    CHECK(make_layout(5).gamma == doctest::Approx(1.5));
    CHECK_THROWS_AS(make_layout(0), DomainError);
}

TEST_CASE("binomial is exact on Pascal's triangle") {
    for (int a = 0; a <= 40; ++a) {
        CHECK(binomial(a, 0) == 1);
        CHECK(binomial(a, a) == 1);
        for (int b = 1; b < a; ++b) {
            CHECK(binomial(a, b) == binomial(a - 1, b - 1) + binomial(a - 1, b));
        }
    }
    CHECK(binomial(3, 5) == 0);
}

TEST_CASE("mode ordering agrees with the exhaustive eigenvalue list") {
    for (int d = 1; d <= 5; ++d) {
        const std::vector<int> levels = brute_levels(d, 12);
        // stay below the last complete level so indices are in range
        const auto safe = static_cast<std::int64_t>(levels.size()) -
                          binomial(12 + d - 1, d - 1);
        for (std::int64_t n = 0; n < safe; ++n) {
            CHECK(level_of_mode(n, d) == levels[static_cast<std::size_t>(n)]);
            CHECK(eigenvalue_of_mode(n, d) == 2.0 * levels[static_cast<std::size_t>(n)] + d);
        }
    }
}

TEST_CASE("bucket counts equal the multiplicity binomial exhaustively") {
    for (int d = 1; d <= 5; ++d) {
        for (int m = 0; m <= 30; ++m) {
            const std::int64_t j = (2 * m + d) / 2;
            const Bucket bucket = make_bucket(j, d);
            CHECK(bucket.level == m);
            CHECK(bucket.count == binomial(m + d - 1, d - 1));
            CHECK(bucket.eigenvalue == 2.0 * m + d);
            CHECK(bucket_members(j, d).size() == static_cast<std::size_t>(bucket.count));
        }
    }
    // buckets below the ground eigenvalue are empty
    CHECK(make_bucket(0, 2).level == -1); // window [0, 2) misses lambda_0 = 2
    CHECK(make_bucket(0, 3).level == -1);
    CHECK(make_bucket(1, 5).level == -1); // window [2, 4) misses lambda_0 = 5
}

TEST_CASE("bucket_of inverts the bucket layout") {
    for (int d = 1; d <= 4; ++d) {
        const std::vector<int> levels = brute_levels(d, 10);
        const auto safe = static_cast<std::int64_t>(levels.size()) -
                          binomial(10 + d - 1, d - 1);
        for (std::int64_t n = 0; n < safe; ++n) {
            const std::int64_t j = bucket_of(n, d);
            const Bucket bucket = make_bucket(j, d);
            const double lambda = eigenvalue_of_mode(n, d);
            CHECK(2.0 * static_cast<double>(j) <= lambda);
            CHECK(lambda < 2.0 * static_cast<double>(j) + 2.0);
            CHECK(n >= bucket.first_mode);
            CHECK(n < bucket.first_mode + bucket.count);
        }
    }
}

TEST_CASE("radial buckets hold the eigenvalue 4n + d") {
    for (int d = 2; d <= 4; ++d) {
        for (std::int64_t n = 0; n <= 200; ++n) {
            const std::int64_t j = radial_bucket_of(n, d);
            const double lambda = 4.0 * static_cast<double>(n) + d;
            CHECK(2.0 * static_cast<double>(j) <= lambda);
            CHECK(lambda < 2.0 * static_cast<double>(j) + 2.0);
            CHECK(make_bucket(j, d).eigenvalue == lambda);
        }
    }
}

TEST_CASE("bucket members are lexicographic and sum to the level") {
    const auto members = bucket_members((2 * 4 + 3) / 2, 3); // level 4, d = 3
    CHECK(members.size() == static_cast<std::size_t>(binomial(6, 2)));
    for (std::size_t i = 0; i < members.size(); ++i) {
        int total = 0;
        for (int part : members[i]) total += part;
        CHECK(total == 4);
        if (i > 0) CHECK(std::lexicographical_compare(members[i - 1].begin(), members[i - 1].end(),
                                                      members[i].begin(), members[i].end()));
    }
}

TEST_CASE("spectral function is basis independent") {
    // permutation invariance, d = 3
    const std::vector<double> x = {0.4, -1.1, 0.75};
    const std::vector<double> x_perm = {0.75, 0.4, -1.1};
    for (std::int64_t j : {3, 7, 12}) {
        const double a = spectral_function(j, 3, x);
        const double b = spectral_function(j, 3, x_perm);
        CHECK(a == doctest::Approx(b).epsilon(1e-12));
    }
    // rotation invariance, d = 2
    const double r = 1.3;
    for (std::int64_t j : {5, 11}) {
        const std::vector<double> e1 = {r, 0.0};
        double prev = spectral_function(j, 2, e1);
        for (double angle : {0.3, 1.2, 2.6}) {
            const std::vector<double> rx = {r * std::cos(angle), r * std::sin(angle)};
            const double cur = spectral_function(j, 2, rx);
            CHECK(cur == doctest::Approx(prev).epsilon(1e-9));
            prev = cur;
        }
    }
}

TEST_CASE("spectral function reduces to single modes at the edges") {
    // d = 1: bucket j holds exactly h_j
    for (int j : {0, 3, 17}) {
        const std::vector<double> x = {0.9};
        const auto expected = static_cast<double>(oracle::hermite_fn(j, 0.9L) *
                                                  oracle::hermite_fn(j, 0.9L));
        CHECK(spectral_function(j, 1, x) == doctest::Approx(expected).epsilon(1e-10));
    }
    // d = 2 ground state at the origin: phi_0(0)^2 = 1/pi
    const std::vector<double> origin = {0.0, 0.0};
    CHECK(spectral_function(1, 2, origin) ==
          doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-12));
    CHECK_THROWS_AS(spectral_function(3, 4, std::vector<double>(4, 0.0)), BudgetExceeded);
}

TEST_CASE("hermite_sup_sweep matches brute-force sups") {
    const std::vector<double> sups = hermite_sup_sweep(50);
    for (int n : {10, 50}) {
        // dense scan near the turning point sqrt(2n+1) plus the bulk
        long double best = 0.0L;
        const double edge = std::sqrt(2.0 * n + 1.0) + 2.0;
        for (double t = 0.0; t <= edge; t += 5e-4) {
            best = std::max(best, std::fabs(oracle::hermite_fn(n, t)));
        }
        CHECK(sups[static_cast<std::size_t>(n)] ==
              doctest::Approx(static_cast<double>(best)).epsilon(1e-3));
    }
    // decay: sup of order 5000 is below sup of order 100
    const std::vector<double> wide = hermite_sup_sweep(200);
    CHECK(wide[200] < wide[50]);
}

TEST_CASE("karadzhov ratios are positive and tame for small buckets") {
    for (int d : {2, 3}) {
        for (std::int64_t j : {5, 10, 20}) {
            const double ratio = karadzhov_ratio(j, d);
            CHECK(ratio > 0.0);
            CHECK(ratio < 10.0);
        }
    }
}

TEST_CASE("norms agree with closed forms") {
    // zs of the bucket rule max^2 = j^{-2} at s = 0, d = 1: sqrt(sum 1/j^2)
    const CoefficientRule inv_sq = bucket_power_rule(-2.0);
    const double zs = zs_norm(inv_sq, 0.0, 1, 2000000);
    CHECK(zs == doctest::Approx(1.2825498301618641).epsilon(1e-6)); // pi/sqrt(6)

    // hs at s = 0 is the plain l2 norm of the coefficients
    const CoefficientRule few = explicit_rule({3.0, 4.0});
    CHECK(hs_norm(few, 0.0, 2, 10) == doctest::Approx(5.0).epsilon(1e-14));

    // s-weighting multiplies each mode by lambda_n^s
    const CoefficientRule one = explicit_rule({1.0});
    const double d3 = hs_norm(one, 2.0, 3, 5);
    CHECK(d3 == doctest::Approx(3.0).epsilon(1e-14)); // lambda_0 = 3, s = 2
}

TEST_CASE("mode sums are sandwiched by bucket extremes") {
    const CoefficientRule rule = power_law_rule(0.8);
    for (int d : {2, 3}) {
        double lower = 0.0;
        double upper = 0.0;
        double modes = 0.0;
        std::int64_t n_cursor = 0;
        for (std::int64_t j = 1; j <= 60; ++j) {
            const Bucket bucket = make_bucket(j, d);
            if (bucket.level < 0) continue;
            lower += static_cast<double>(bucket.count) * rule.bucket_min_sq(j, d);
            upper += static_cast<double>(bucket.count) * rule.bucket_max_sq(j, d);
            double bucket_total = 0.0;
            for (std::int64_t i = 0; i < bucket.count; ++i, ++n_cursor) {
                modes += rule.value_sq(n_cursor, j);
                bucket_total += rule.value_sq(n_cursor, j);
            }
            CHECK(rule.bucket_sum_sq(j, d) ==
                  doctest::Approx(bucket_total).epsilon(1e-12));
        }
        CHECK(lower <= modes * (1.0 + 1e-12));
        CHECK(modes <= upper * (1.0 + 1e-12));
    }
}

TEST_CASE("bucket-constant rules satisfy max-vs-mean with constant one") {
    const CoefficientRule rule = bucket_power_rule(-1.0);
    ConditionQuery query;
    query.kind = ConditionKind::bucket_max_vs_mean;
    const ConditionReport report = check_condition(rule, query, 3, 200);
    CHECK(report.holds);
    CHECK(report.upper_constant == doctest::Approx(1.0).epsilon(1e-12));

    query.kind = ConditionKind::bucket_comparable;
    const ConditionReport two_sided = check_condition(rule, query, 3, 200);
    CHECK(two_sided.holds);
    CHECK(two_sided.lower_constant == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("one spike per bucket defeats max-vs-mean") {
    // d = 2: bucket j holds j modes; put the whole mass on the first one
    const int d = 2;
    std::vector<double> values;
    for (std::int64_t j = 1; j <= 80; ++j) {
        const Bucket bucket = make_bucket(j, d);
        for (std::int64_t i = 0; i < bucket.count; ++i) {
            values.push_back(i == 0 ? 1.0 : 1e-8);
        }
    }
    const CoefficientRule rule = explicit_rule(std::move(values));
    ConditionQuery query;
    query.kind = ConditionKind::bucket_max_vs_mean;
    const ConditionReport report = check_condition(rule, query, d, 79);
    CHECK_FALSE(report.holds);
    CHECK(report.upper_constant > 10.0);
    CHECK(report.witness_j > 0);
}

TEST_CASE("weighted-sum conditions split at the summability boundary") {
    const int d = 3; // gamma = 1/2, beta = 3/2
    ConditionQuery query;
    query.kind = ConditionKind::lp_weighted_sum;
    query.p = 6.0; // weight j^{gamma + 2 beta / p} = j^1

    // terms j^1 * j^{-3} = j^-2: summable
    CHECK(check_condition(bucket_power_rule(-3.0), query, d, 4000).holds);
    // terms j^1 * j^{-1.5} = j^-0.5: divergent
    CHECK_FALSE(check_condition(bucket_power_rule(-1.5), query, d, 4000).holds);

    query.kind = ConditionKind::log_weighted_sum;
    query.alpha = 2.0;
    // j^gamma (ln j)^2 * max^2 with max^2 = j^{-gamma-1} (ln j)^{-4}:
    // terms 1 / (j (ln j)^2), summable
    CHECK(check_condition(bucket_power_rule(-0.5 - 1.0, -4.0), query, d, 4000).holds);
    // without the log damping the terms are 1/j (ln j)^2: divergent
    CHECK_FALSE(check_condition(bucket_power_rule(-0.5 - 1.0, 2.0), query, d, 4000).holds);
}

TEST_CASE("dyadic block rule saturates its own decay budget") {
    const int d = 1;
    const double gamma = make_layout(d).gamma;
    const CoefficientRule rule = dyadic_block_rule(0.5, 0.0, gamma);
    ConditionQuery query;
    query.kind = ConditionKind::block_decay;
    query.mu = 0.5;
    query.nu = 0.0;
    const ConditionReport report = check_condition(rule, query, d, 4095);
    CHECK(report.holds);
    // per-block constants hit 1 exactly by construction
    for (double c : report.partial_sums) {
        CHECK(c == doctest::Approx(1.0).epsilon(1e-9));
    }

    // a rule decaying slower than the queried mu must fail
    const CoefficientRule slow = dyadic_block_rule(0.2, 0.0, gamma);
    CHECK_FALSE(check_condition(slow, query, d, 4095).holds);
}

} // TEST_SUITE("spectral")
