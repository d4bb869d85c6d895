#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "herm/errors.hpp"
#include "herm/scaled.hpp"

namespace herm {

// Sign and natural-log magnitude of a possibly huge value. sign == 0 encodes
// an exact zero (zeros of the polynomials are legitimate values, so "log of
// zero" needs its own state rather than a sentinel magnitude).
struct SignedLog {
    int sign = 0;
    double log_abs = 0.0;

    double realize() const {
        if (sign == 0) return 0.0;
        return static_cast<double>(sign) * std::exp(log_abs);
    }
};

// Laguerre data at a single point r >= 0 for all degrees 0..n_max:
//  - fn_values[n]: the weighted L^2(0,inf)-normalized function
//      Lfn_n^{(alpha)}(r) = sqrt(n!/Gamma(n+alpha+1)) L_n^{(alpha)}(r) e^{-r/2} r^{alpha/2},
//    finite for every r because the weight absorbs the polynomial growth;
//  - log_poly[n]: sign/log representation of the raw polynomial L_n^{(alpha)}(r),
//    which overflows double near n = 150 for r near its turning point.
struct LaguerreBatch {
    double alpha = 0.0;
    double r = 0.0;
    int n_max = 0;
    std::vector<double> fn_values;
    std::vector<SignedLog> log_poly;
};

LaguerreBatch laguerre_batch(double alpha, double r, int n_max);

// Raw polynomial value at r = 0, L_n^{(alpha)}(0) = Gamma(n+alpha+1)/(Gamma(n+1)Gamma(alpha+1)).
double laguerre_raw_at_zero(int n, double alpha);

// |d/dr L_n^{(alpha)}(r) + L_{n-1}^{(alpha+1)}(r)| with the derivative taken by
// finite differences (step 1e-6). The identity makes this ~0; the caller
// normalizes by the local scale.
double laguerre_derivative_identity_check(double alpha, int n, double r);

// Regime-wise upper-bound envelope for |Lfn_n^{(alpha)}(r)|, without the
// unknown multiplicative constant. With nu = 4n + 2*alpha + 2:
//   [0, 1/nu]          (r nu)^{alpha/2}
//   [1/nu, nu/2]       (r nu)^{-1/4}
//   [nu/2, 3nu/2]      nu^{-1/4} (nu^{1/3} + |nu - r|)^{-1/4}
//   [3nu/2, inf)       exp(-tail_rate * r)
// The default tail_rate 0.1 matches the envelope's documented default; note
// that a valid uniform-in-n bound needs tail_rate <= ~0.067 (see the WKB
// comment in the implementation), which is what the library's own tail
// estimates use.
enum class EnvelopeRegime { origin, bulk, turning, tail };

struct EnvelopeValue {
    double value = 0.0;
    EnvelopeRegime regime = EnvelopeRegime::origin;
};

EnvelopeValue erdelyi_envelope(int n, double alpha, double r, double tail_rate = 0.1);

// Largest tail_rate for which exp(-tail_rate*r) dominates the true decay of
// Lfn beyond 3nu/2 uniformly in n, with a safety margin.
inline constexpr double kValidTailRate = 0.05;

// Near-origin lower-bound region: the largest epsilon <= 1 such that
// |L_n^{(alpha)}(r)| / n^alpha >= c on a grid over (0, epsilon^2/n), with the
// candidate c fixed to half the value at r = 0. Throws SearchFailed when no
// epsilon >= 1e-3 works.
struct SzegoRegion {
    double epsilon = 0.0;
    double c = 0.0;
};

SzegoRegion szego_lower_region(int n, double alpha);

namespace laguerre_detail {

inline void check_domain(double alpha, double r) {
    if (!(alpha > -1.0)) throw DomainError("laguerre: alpha must be > -1");
    if (!(r >= 0.0)) throw DomainError("laguerre: r must be >= 0");
}

// Scaled-state initialization of Lfn_0 at one point. r == 0 is the weight's
// continuous limit: 1/sqrt(Gamma(alpha+1)) for alpha == 0, 0 for alpha > 0,
// and divergent for alpha < 0 (rejected).
inline Scaled normalized_init(double alpha, double r) {
    if (r == 0.0) {
        if (alpha < 0.0) throw DomainError("laguerre: value at r = 0 diverges for alpha < 0");
        if (alpha > 0.0) return Scaled{0.0, 0};
        return scaled_from_log(-0.5 * std::lgamma(alpha + 1.0));
    }
    return scaled_from_log(-0.5 * r + 0.5 * alpha * std::log(r) - 0.5 * std::lgamma(alpha + 1.0));
}

} // namespace laguerre_detail

// Streaming evaluation of the normalized functions Lfn_n on a fixed set of
// points, ascending in n. consume(n, values) sees values[g] = Lfn_n(r[g]),
// optionally multiplied by 2^{log2_prefactor[g]}; folding the prefactor into
// the exponent lets callers attach singular per-point weights (the radial
// basis needs |x|^{-(d/2-1)}) without over- or underflow at intermediate
// stages. Each point advances independently (thread-split safe).
template <class F>
void laguerre_sweep(double alpha, std::span<const double> r_points, int n_max, F&& consume,
                    std::span<const double> log2_prefactor = {}) {
    laguerre_detail::check_domain(alpha, r_points.empty() ? 0.0 : r_points[0]);
    const std::size_t g_count = r_points.size();
    std::vector<double> m_prev(g_count, 0.0);
    std::vector<double> m_cur(g_count);
    std::vector<std::int64_t> e(g_count);
    std::vector<double> realized(g_count);

    for (std::size_t g = 0; g < g_count; ++g) {
        laguerre_detail::check_domain(alpha, r_points[g]);
        const Scaled s0 = laguerre_detail::normalized_init(alpha, r_points[g]);
        m_cur[g] = s0.m;
        e[g] = s0.e;
    }

    const bool has_prefactor = !log2_prefactor.empty();
    for (int n = 0; n <= n_max; ++n) {
        for (std::size_t g = 0; g < g_count; ++g) {
            const std::int64_t shift = has_prefactor ? static_cast<std::int64_t>(log2_prefactor[g]) : 0;
            double m = m_cur[g];
            if (has_prefactor) {
                // split the prefactor into an integer exponent shift plus a
                // fractional mantissa factor to stay exact in the exponent
                const double frac = log2_prefactor[g] - static_cast<double>(shift);
                m *= std::exp2(frac);
            }
            realized[g] = scaled_realize(m, e[g] + shift);
        }
        consume(n, std::span<const double>(realized));
        if (n == n_max) break;

        // Lfn_{n+1} = [(2n+1+alpha-r) Lfn_n - sqrt(n(n+alpha)) Lfn_{n-1}] / sqrt((n+1)(n+1+alpha))
        const double dn = static_cast<double>(n);
        const double inv_lead = 1.0 / std::sqrt((dn + 1.0) * (dn + 1.0 + alpha));
        const double hold = std::sqrt(dn * (dn + alpha));
        const double mid = 2.0 * dn + 1.0 + alpha;
        for (std::size_t g = 0; g < g_count; ++g) {
            const double next = ((mid - r_points[g]) * m_cur[g] - hold * m_prev[g]) * inv_lead;
            m_prev[g] = m_cur[g];
            m_cur[g] = next;
            scaled_renorm(m_prev[g], m_cur[g], e[g]);
        }
    }
}

// Streaming raw-polynomial recurrence at one point, ascending in n;
// consume(n, SignedLog of L_n^{(alpha)}(r)).
template <class F>
void laguerre_raw_sweep(double alpha, double r, int n_max, F&& consume) {
    laguerre_detail::check_domain(alpha, r);
    double m_prev = 0.0;
    double m_cur = 1.0; // L_0 = 1
    std::int64_t e = 0;
    for (int n = 0; n <= n_max; ++n) {
        SignedLog sl;
        sl.sign = (m_cur > 0.0) - (m_cur < 0.0);
        sl.log_abs = scaled_log_abs(m_cur, e);
        consume(n, sl);
        if (n == n_max) break;

        // (n+1) L_{n+1} = (2n+1+alpha-r) L_n - (n+alpha) L_{n-1}
        const double dn = static_cast<double>(n);
        const double next = ((2.0 * dn + 1.0 + alpha - r) * m_cur - (dn + alpha) * m_prev) / (dn + 1.0);
        m_prev = m_cur;
        m_cur = next;
        scaled_renorm(m_prev, m_cur, e);
    }
}

} // namespace herm
