#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "herm/errors.hpp"

namespace herm {

// Counter-based noise. Every random variate X_n is a pure function of
// (seed, n), produced by one Philox4x32-10 block. Two consequences matter
// for the experiments:
//   * partial sums for nested cutoffs share the same realization, so the
//     convergence of u_lambda as lambda grows is observed along one sample
//     path, and
//   * threads never need to coordinate; any work split over n reproduces
//     the serial stream bitwise.
namespace philox {

inline constexpr std::uint32_t kW32A = 0x9E3779B9u;  // key bump, golden ratio
inline constexpr std::uint32_t kW32B = 0xBB67AE85u;  // key bump, sqrt(3)-1
inline constexpr std::uint32_t kM4x32A = 0xD2511F53u;
inline constexpr std::uint32_t kM4x32B = 0xCD9E8D57u;

// One 10-round Philox4x32 block: 128-bit counter, 64-bit key.
std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> counter,
                                   std::array<std::uint32_t, 2> key);

} // namespace philox

enum class NoiseKind { rademacher, gaussian, bounded_uniform };

// A centered law with the subgaussian parameter used in reports. sigma is
// exact for Rademacher and Gaussian; for the uniform on [-a, a] we store
// the standard deviation a/sqrt(3) as the subgaussian proxy.
struct RandomLaw {
    NoiseKind kind = NoiseKind::rademacher;
    double a = 1.0;     // half-width, bounded_uniform only
    double sigma = 1.0;
};

RandomLaw rademacher_law();
RandomLaw gaussian_law();
RandomLaw bounded_uniform_law(double a); // DomainError for a <= 0

// The n-th variate of the stream identified by seed. One Philox block per
// entry: Rademacher from one output bit, uniforms from a 53-bit mantissa
// built out of two 32-bit words, Gaussian via Box-Muller from two uniforms.
double noise_entry(const RandomLaw& law, std::uint64_t seed, std::uint64_t n);

// Entries 0..count-1 of the stream.
std::vector<double> draw_noise(const RandomLaw& law, std::int64_t count, std::uint64_t seed);

// Derives the trial-t stream seed from the master seed (splitmix64-style
// finalizer). Documented so runs are reproducible from the config alone.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t t);

} // namespace herm
