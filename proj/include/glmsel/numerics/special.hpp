#ifndef GLMSEL_NUMERICS_SPECIAL_HPP
#define GLMSEL_NUMERICS_SPECIAL_HPP

#include <cmath>
#include <numbers>

namespace glmsel {

inline constexpr double log_sqrt_2pi = 0.91893853320467274178;

inline double normal_log_pdf(double x) { return -0.5 * x * x - log_sqrt_2pi; }

inline double normal_pdf(double x) { return std::exp(normal_log_pdf(x)); }

namespace detail {

// log Q(t) = log(1 - Phi(t)) for t > 20 from the Mills-ratio continued fraction
// R(t) = 1 / (t + 1 / (t + 2 / (t + 3 / (t + ...)))), evaluated bottom-up.
inline double log_upper_tail_cf(double t) {
    double tail = t;
    for (int k = 60; k >= 1; --k) {
        tail = t + k / tail;
    }
    return normal_log_pdf(t) - std::log(tail);
}

inline double log_phi(double x) {
    if (x > 0.0) {
        return std::log1p(-0.5 * std::erfc(x * std::numbers::sqrt2 / 2.0));
    }
    if (x > -20.0) {
        return std::log(0.5 * std::erfc(-x * std::numbers::sqrt2 / 2.0));
    }
    return log_upper_tail_cf(-x);
}

}  // namespace detail

struct LogNormalCdf {
    double log_phi;      ///< log Phi(x)
    double log_1m_phi;   ///< log(1 - Phi(x))
};

/**
 * Stable log of the standard normal CDF and of its complement.
 *
 * Neither value is formed by taking the log of a raw CDF in a tail: the upper
 * side goes through log1p and the far lower tail through a continued fraction,
 * so both stay finite well past |x| = 40. The complement is defined as the
 * mirrored lower value, so `log_1m_phi(x) == log_phi(-x)` bit for bit.
 */
inline LogNormalCdf log_phi_cdf(double x) {
    return {detail::log_phi(x), detail::log_phi(-x)};
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x * std::numbers::sqrt2 / 2.0); }

}  // namespace glmsel

#endif  // GLMSEL_NUMERICS_SPECIAL_HPP
