#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "herm/noise.hpp"

using namespace herm;

TEST_SUITE("noise") {

// Known-answer vectors for Philox4x32-10 from the reference implementation
// (Random123): all-zero input, and the pi-digits counter/key pair.
TEST_CASE("philox block matches the reference vectors") {
    const auto zero = philox::block({0u, 0u, 0u, 0u}, {0u, 0u});
    CHECK(zero[0] == 0x6627e8d5u);
    CHECK(zero[1] == 0xe169c58du);
    CHECK(zero[2] == 0xbc57ac4cu);
    CHECK(zero[3] == 0x9b00dbd8u);

    const auto pi = philox::block({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                  {0xa4093822u, 0x299f31d0u});
    CHECK(pi[0] == 0xd16cfe09u);
    CHECK(pi[1] == 0x94fdccebu);
    CHECK(pi[2] == 0x5001e420u);
    CHECK(pi[3] == 0x24126ea1u);
}

TEST_CASE("entries are a pure function of seed and index") {
    const RandomLaw law = gaussian_law();
    CHECK(noise_entry(law, 42, 7) == noise_entry(law, 42, 7));
    CHECK(noise_entry(law, 42, 7) != noise_entry(law, 42, 8));
    CHECK(noise_entry(law, 42, 7) != noise_entry(law, 43, 7));

    // draw_noise agrees with per-entry access at every index
    const std::vector<double> batch = draw_noise(law, 100, 42);
    for (std::uint64_t n = 0; n < 100; ++n) {
        CHECK(batch[n] == noise_entry(law, 42, n));
    }
    CHECK(draw_noise(law, 0, 1).empty());
}

TEST_CASE("rademacher entries are exactly +-1 and balanced") {
    const RandomLaw law = rademacher_law();
    std::int64_t sum = 0;
    const std::int64_t count = 100000;
    for (std::int64_t n = 0; n < count; ++n) {
        const double x = noise_entry(law, 5, static_cast<std::uint64_t>(n));
        CHECK((x == 1.0 || x == -1.0));
        sum += x > 0 ? 1 : -1;
    }
    // 4 sigma band around the balanced count
    CHECK(std::llabs(sum) < 4 * static_cast<std::int64_t>(std::sqrt(count)));
}

TEST_CASE("gaussian sample moments match the law") {
    const RandomLaw law = gaussian_law();
    const std::int64_t count = 200000;
    double sum = 0.0;
    double sum_sq = 0.0;
    double sum_4 = 0.0;
    for (std::int64_t n = 0; n < count; ++n) {
        const double x = noise_entry(law, 11, static_cast<std::uint64_t>(n));
        sum += x;
        sum_sq += x * x;
        sum_4 += x * x * x * x;
    }
    const double mean = sum / count;
    const double var = sum_sq / count - mean * mean;
    CHECK(std::fabs(mean) < 4.0 / std::sqrt(static_cast<double>(count)));
    CHECK(var == doctest::Approx(1.0).epsilon(0.02));
    CHECK(sum_4 / count == doctest::Approx(3.0).epsilon(0.05)); // gaussian kurtosis
}

TEST_CASE("bounded uniform stays inside the interval with the right spread") {
    const RandomLaw law = bounded_uniform_law(2.5);
    CHECK(law.sigma == doctest::Approx(2.5 / std::sqrt(3.0)));
    double sum_sq = 0.0;
    const std::int64_t count = 200000;
    for (std::int64_t n = 0; n < count; ++n) {
        const double x = noise_entry(law, 3, static_cast<std::uint64_t>(n));
        CHECK(x >= -2.5);
        CHECK(x <= 2.5);
        sum_sq += x * x;
    }
    CHECK(sum_sq / count == doctest::Approx(2.5 * 2.5 / 3.0).epsilon(0.02));
    CHECK_THROWS_AS(bounded_uniform_law(0.0), DomainError);
    CHECK_THROWS_AS(bounded_uniform_law(-1.0), DomainError);
}

// The laws are used through subgaussian tail machinery, so check the
// moment generating function bound E[e^{rX}] <= e^{sigma^2 r^2 / 2}
// empirically at a few r.
TEST_CASE("empirical MGF satisfies the subgaussian bound") {
    const std::int64_t count = 100000;
    for (const RandomLaw& law : {rademacher_law(), gaussian_law(), bounded_uniform_law(1.0)}) {
        for (const double r : {-2.0, -0.5, 0.5, 2.0}) {
            double mgf = 0.0;
            for (std::int64_t n = 0; n < count; ++n) {
                mgf += std::exp(r * noise_entry(law, 17, static_cast<std::uint64_t>(n)));
            }
            mgf /= static_cast<double>(count);
            const double bound = std::exp(0.5 * law.sigma * law.sigma * r * r);
            CHECK(mgf <= bound * 1.05); // slack for Monte-Carlo error
        }
    }
}

TEST_CASE("mix_seed decorrelates trial streams deterministically") {
    CHECK(mix_seed(1, 2) == mix_seed(1, 2));
    std::set<std::uint64_t> seen;
    for (std::uint64_t t = 0; t < 1000; ++t) seen.insert(mix_seed(99, t));
    CHECK(seen.size() == 1000); // no collisions across trials

    // derived streams should not overlap with the master stream
    const RandomLaw law = gaussian_law();
    const std::uint64_t derived = mix_seed(99, 0);
    CHECK(noise_entry(law, derived, 0) != noise_entry(law, 99, 0));
}

} // TEST_SUITE("noise")
