#include "herm/noise.hpp"

#include <cmath>
#include <numbers>

namespace herm {

namespace philox {
namespace {

struct HiLo {
    std::uint32_t hi;
    std::uint32_t lo;
};

HiLo mulhilo(std::uint32_t a, std::uint32_t b) {
    const std::uint64_t prod = static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(b);
    return {static_cast<std::uint32_t>(prod >> 32), static_cast<std::uint32_t>(prod)};
}

std::array<std::uint32_t, 4> round_once(std::array<std::uint32_t, 4> c,
                                        std::array<std::uint32_t, 2> k) {
    const HiLo p0 = mulhilo(kM4x32A, c[0]);
    const HiLo p1 = mulhilo(kM4x32B, c[2]);
    return {p1.hi ^ c[1] ^ k[0], p1.lo, p0.hi ^ c[3] ^ k[1], p0.lo};
}

} // namespace

std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> counter,
                                   std::array<std::uint32_t, 2> key) {
    counter = round_once(counter, key);
    for (int r = 1; r < 10; ++r) {
        key[0] += kW32A;
        key[1] += kW32B;
        counter = round_once(counter, key);
    }
    return counter;
}

} // namespace philox

namespace {

// 53-bit uniform in [0, 1) from two words: 27 high bits of a, 26 of b.
double uniform53(std::uint32_t a, std::uint32_t b) {
    const std::uint64_t mantissa = (static_cast<std::uint64_t>(a >> 5) << 26) | (b >> 6);
    return static_cast<double>(mantissa) * 0x1p-53;
}

} // namespace

RandomLaw rademacher_law() { return {NoiseKind::rademacher, 1.0, 1.0}; }

RandomLaw gaussian_law() { return {NoiseKind::gaussian, 1.0, 1.0}; }

RandomLaw bounded_uniform_law(double a) {
    if (!(a > 0.0)) throw DomainError("bounded_uniform_law: half-width must be positive");
    return {NoiseKind::bounded_uniform, a, a / std::sqrt(3.0)};
}

double noise_entry(const RandomLaw& law, std::uint64_t seed, std::uint64_t n) {
    const std::array<std::uint32_t, 4> counter = {
        static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(n >> 32), 0u, 0u};
    const std::array<std::uint32_t, 2> key = {
        static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    const std::array<std::uint32_t, 4> w = philox::block(counter, key);

    switch (law.kind) {
        case NoiseKind::rademacher:
            return (w[0] & 1u) ? 1.0 : -1.0;
        case NoiseKind::gaussian: {
            // Box-Muller; 1 - u keeps the log argument in (0, 1]
            const double u1 = 1.0 - uniform53(w[0], w[1]);
            const double u2 = uniform53(w[2], w[3]);
            return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
        }
        case NoiseKind::bounded_uniform:
            return law.a * (2.0 * uniform53(w[0], w[1]) - 1.0);
    }
    throw DomainError("noise_entry: unknown law kind");
}

std::vector<double> draw_noise(const RandomLaw& law, std::int64_t count, std::uint64_t seed) {
    if (count < 0) throw DomainError("draw_noise: count must be >= 0");
    std::vector<double> out(static_cast<std::size_t>(count));
    for (std::int64_t n = 0; n < count; ++n) {
        out[static_cast<std::size_t>(n)] = noise_entry(law, seed, static_cast<std::uint64_t>(n));
    }
    return out;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t t) {
    std::uint64_t z = seed + (t + 1) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

} // namespace herm
