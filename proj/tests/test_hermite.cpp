#include <doctest.h>

#include <cmath>
#include <vector>

#include "herm/hermite.hpp"
#include "oracles.hpp"

using namespace herm;

namespace {
// frozen with 40-digit arithmetic, independent of both implementations
constexpr double kPiQuarterInv = 0.75112554446494248;   // pi^{-1/4}
constexpr double kH50At1p3 = -0.22621953385162207;
constexpr double kH7At0p4 = -0.40618156090964546;
constexpr double kH100At6 = 0.15955693810651043;
constexpr double kH3AtMinus2p1 = -0.58435242580508815;
constexpr double kGroundDerivAt1 = -0.45558067201133253; // -pi^{-1/4} e^{-1/2}
constexpr double kTensor23 = -0.0012561740086615196;     // h_2(0.7) h_3(-1.1)
} // namespace

TEST_SUITE("hermite") {

TEST_CASE("ground state value and Gaussian weight") {
    CHECK(hermite_batch(0.0, 0).values[0] == doctest::Approx(kPiQuarterInv).epsilon(1e-13));
    for (double t : {0.3, -1.7, 5.0, 11.2}) {
        const double expected = kPiQuarterInv * std::exp(-0.5 * t * t);
        CHECK(hermite_batch(t, 3).values[0] == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("odd orders vanish at the origin") {
    const HermiteBatch b = hermite_batch(0.0, 9);
    for (int k = 1; k <= 9; k += 2) CHECK(b.values[k] == 0.0);
}

TEST_CASE("frozen mid-order values") {
    CHECK(hermite_batch(1.3, 50).values[50] == doctest::Approx(kH50At1p3).epsilon(1e-11));
    CHECK(hermite_batch(0.4, 7).values[7] == doctest::Approx(kH7At0p4).epsilon(1e-12));
    CHECK(hermite_batch(6.0, 100).values[100] == doctest::Approx(kH100At6).epsilon(1e-11));
    CHECK(hermite_batch(-2.1, 3).values[3] == doctest::Approx(kH3AtMinus2p1).epsilon(1e-12));
}

TEST_CASE("batch agrees with the long double reference for k <= 100") {
    for (double t : {0.17, 1.3, 3.7, -2.6, 9.9, 13.1}) {
        const HermiteBatch b = hermite_batch(t, 100);
        for (int k = 0; k <= 100; ++k) {
            const double ref = static_cast<double>(oracle::hermite_fn(k, t));
            if (std::fabs(ref) < 1e-280) continue; // both flushed far below the turning point
            CHECK(b.values[k] == doctest::Approx(ref).epsilon(1e-10));
        }
    }
}

TEST_CASE("no overflow or NaN across the classically allowed range") {
    const int k_max = 100000;
    for (double t : {0.5, 120.0, 400.0, 2.0 * std::sqrt(2.0 * k_max + 1.0)}) {
        const HermiteBatch b = hermite_batch(t, k_max);
        bool all_finite = true;
        double max_abs = 0.0;
        for (double v : b.values) {
            all_finite = all_finite && std::isfinite(v);
            max_abs = std::max(max_abs, std::fabs(v));
        }
        CHECK(all_finite);
        if (t <= 400.0) CHECK(max_abs > 0.0); // modes past the turning point are live
    }
}

TEST_CASE("reflection symmetry") {
    for (double t : {0.9, 4.2, 17.0}) {
        const HermiteBatch plus = hermite_batch(t, 60);
        const HermiteBatch minus = hermite_batch(-t, 60);
        for (int k = 0; k <= 60; ++k) {
            CHECK(std::fabs(minus.values[k]) == std::fabs(plus.values[k]));
            const double parity = (k % 2 == 0) ? 1.0 : -1.0;
            CHECK(minus.values[k] == parity * plus.values[k]);
        }
    }
}

TEST_CASE("sweep consumer sees each order exactly once and matches batch") {
    const std::vector<double> pts = {-3.0, 0.0, 0.25, 1.3, 8.0};
    std::vector<HermiteBatch> batches;
    for (double t : pts) batches.push_back(hermite_batch(t, 25));

    int calls = 0;
    hermite_sweep(pts, 25, [&](int k, std::span<const double> v) {
        REQUIRE(k == calls);
        ++calls;
        for (std::size_t g = 0; g < pts.size(); ++g) CHECK(v[g] == batches[g].values[k]);
    });
    CHECK(calls == 26);
}

TEST_CASE("derivative identity values") {
    CHECK(hermite_derivative(0, 0.0) == 0.0);
    CHECK(hermite_derivative(0, 1.0) == doctest::Approx(kGroundDerivAt1).epsilon(1e-12));

    // central finite difference of the batch value, step 1e-6
    for (auto [k, t] : {std::pair{7, 0.4}, {3, -1.9}, {20, 2.2}}) {
        const double h = 1e-6;
        const double fd = (hermite_batch(t + h, k).values[k] - hermite_batch(t - h, k).values[k]) / (2.0 * h);
        CHECK(std::fabs(hermite_derivative(k, t) - fd) < 1e-5);
    }
}

TEST_CASE("tensor products") {
    const int a00[2] = {0, 0};
    const double x00[2] = {0.0, 0.0};
    CHECK(hermite_tensor(a00, x00) == doctest::Approx(1.0 / std::sqrt(std::acos(-1.0))).epsilon(1e-13));

    const int a10[2] = {1, 0};
    const double x05[2] = {0.0, 5.0};
    CHECK(hermite_tensor(a10, x05) == 0.0);

    const int a23[2] = {2, 3};
    const double x[2] = {0.7, -1.1};
    const double direct = hermite_batch(0.7, 2).values[2] * hermite_batch(-1.1, 3).values[3];
    CHECK(hermite_tensor(a23, x) == direct); // same factor path, bitwise
    CHECK(hermite_tensor(a23, x) == doctest::Approx(kTensor23).epsilon(1e-12));
}

} // TEST_SUITE
