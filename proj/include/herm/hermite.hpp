#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "herm/scaled.hpp"

namespace herm {

// All 1-D Hermite functions h_0..h_{k_max} at a single point t, where h_k is
// the L^2(R)-normalized eigenfunction of -d^2/dt^2 + t^2 with eigenvalue 2k+1.
struct HermiteBatch {
    double t = 0.0;
    int k_max = 0;
    std::vector<double> values; // values[k] = h_k(t)
};

// Streaming evaluation of h_k on a fixed set of points, ascending in k.
// consume(k, values) is called once per order with values[g] = h_k(points[g]);
// the span is only valid during the call. Each point advances independently,
// so the result is identical however the points are split across threads.
template <class F>
void hermite_sweep(std::span<const double> points, int k_max, F&& consume) {
    const std::size_t g_count = points.size();
    std::vector<double> m_prev(g_count, 0.0);
    std::vector<double> m_cur(g_count);
    std::vector<std::int64_t> e(g_count);
    std::vector<double> realized(g_count);

    constexpr double log_pi_quarter = 0.28618247146235004; // ln(pi)/4
    for (std::size_t g = 0; g < g_count; ++g) {
        const double t = points[g];
        const Scaled s0 = scaled_from_log(-log_pi_quarter - 0.5 * t * t);
        m_cur[g] = s0.m;
        e[g] = s0.e;
    }

    for (int k = 0; k <= k_max; ++k) {
        for (std::size_t g = 0; g < g_count; ++g) {
            realized[g] = scaled_realize(m_cur[g], e[g]);
        }
        consume(k, std::span<const double>(realized));
        if (k == k_max) break;

        // h_{k+1}(t) = sqrt(2/(k+1)) t h_k(t) - sqrt(k/(k+1)) h_{k-1}(t)
        const double a = std::sqrt(2.0 / (k + 1));
        const double b = std::sqrt(static_cast<double>(k) / (k + 1));
        for (std::size_t g = 0; g < g_count; ++g) {
            const double next = a * points[g] * m_cur[g] - b * m_prev[g];
            m_prev[g] = m_cur[g];
            m_cur[g] = next;
            scaled_renorm(m_prev[g], m_cur[g], e[g]);
        }
    }
}

// All orders 0..k_max at one point, by the normalized upward recurrence.
HermiteBatch hermite_batch(double t, int k_max);

// h_k'(t) = 2^{-1/2} (sqrt(k) h_{k-1}(t) - sqrt(k+1) h_{k+1}(t)), h_{-1} = 0.
double hermite_derivative(int k, double t);

// Tensor eigenfunction phi_alpha(x) = h_{alpha_1}(x_1) ... h_{alpha_d}(x_d),
// eigenvalue 2|alpha| + d. Computed as the product of per-coordinate batches.
double hermite_tensor(std::span<const int> alpha, std::span<const double> x);

} // namespace herm
