#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace herm {

// Mantissa/exponent carrier for upward three-term recurrences, v = m * 2^e.
//
// The weighted Hermite and Laguerre functions start exponentially small at
// points far from the origin (h_0(t) = pi^{-1/4} e^{-t^2/2} underflows to an
// exact double 0 near |t| = 38.6) and the recurrence can never recover from
// a zero start. Carrying a shared power-of-two exponent besides the mantissa
// keeps every intermediate in range; values are realized to double only at
// the end, flushing to 0 when the true magnitude is below ~2^-1060.
struct Scaled {
    double m = 0.0;
    std::int64_t e = 0;
};

namespace scaled_detail {
inline constexpr double kRenormThreshold = 0x1p100;   // renormalize above 2^100
inline constexpr double kRenormFactor = 0x1p-100;
inline constexpr std::int64_t kRenormShift = 100;
inline constexpr std::int64_t kFlushExponent = -1060; // realized value is 0 below this
} // namespace scaled_detail

// Initialize from a natural-log magnitude (value = exp(log_value) > 0).
inline Scaled scaled_from_log(double log_value) {
    const double log2_value = log_value / std::numbers::ln2_v<double>;
    const double e_floor = std::floor(log2_value);
    Scaled s;
    s.m = std::exp2(log2_value - e_floor);
    s.e = static_cast<std::int64_t>(e_floor);
    return s;
}

// Shift the shared exponent back toward 1 once a mantissa grows past 2^100.
// Both recurrence states must be rescaled together so their ratio survives.
inline void scaled_renorm(double& m_prev, double& m_cur, std::int64_t& e) {
    using namespace scaled_detail;
    if (std::fabs(m_cur) > kRenormThreshold || std::fabs(m_prev) > kRenormThreshold) {
        m_prev *= kRenormFactor;
        m_cur *= kRenormFactor;
        e += kRenormShift;
    }
}

// Realize m * 2^e as a double; exponents far below the denormal range flush to 0.
inline double scaled_realize(double m, std::int64_t e) {
    using namespace scaled_detail;
    if (m == 0.0 || e < kFlushExponent) return 0.0;
    if (e > 1100) return m * std::numeric_limits<double>::infinity();
    return std::ldexp(m, static_cast<int>(e));
}

inline double scaled_realize(const Scaled& s) { return scaled_realize(s.m, s.e); }

// Natural log of |m * 2^e|; -inf for zero.
inline double scaled_log_abs(double m, std::int64_t e) {
    if (m == 0.0) return -std::numeric_limits<double>::infinity();
    return std::log(std::fabs(m)) + static_cast<double>(e) * std::numbers::ln2_v<double>;
}

} // namespace herm
