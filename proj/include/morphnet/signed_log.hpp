#pragma once

// Signed logarithmic number system (LNS) arithmetic.
//
// A nonzero real v is stored as (sign, ln|v|); multiplication becomes
// addition of log-magnitudes with an XOR of signs, and addition becomes a
// max*-style fold:
//
//   max*(x, y) = ln(e^x + e^y)                      (equal signs)
//   max(x, y) + ln(1 - e^{-|x-y|})                  (opposite signs)
//
// Zero gets an explicit flag rather than a magic log value so that ln 0
// never enters an arithmetic path; the -inf sentinel exists only as the
// identity element of max*.

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>

namespace morphnet {

inline constexpr double kLogZero = -std::numeric_limits<double>::infinity();

// max*(x, y) = ln(e^x + e^y), evaluated as max + log1p(exp(-|x - y|)) so that
// large arguments cannot overflow. -inf is the identity element.
inline double max_star(double x, double y) {
    const double hi = x > y ? x : y;
    const double lo = x > y ? y : x;
    if (std::isinf(lo) && lo < 0.0) return hi;  // also covers max*(-inf, -inf)
    return hi + std::log1p(std::exp(lo - hi));
}

// Left fold of max_star; equals ln(sum_i e^{x_i}).
inline double max_star_n(std::span<const double> xs) {
    if (xs.empty()) throw std::invalid_argument("max_star_n: empty sequence");
    double acc = xs[0];
    for (std::size_t i = 1; i < xs.size(); ++i) acc = max_star(acc, xs[i]);
    return acc;
}

// ln(1 - e^{-delta}) for delta > 0. The expm1 form keeps precision for
// delta < ln 2, where 1 - e^{-delta} would cancel.
inline double log1m_exp(double delta) {
    return delta <= 0.6931471805599453 ? std::log(-std::expm1(-delta))
                                       : std::log1p(-std::exp(-delta));
}

struct SignedLogValue {
    int sign = 1;              // +1 or -1; ignored when is_zero
    double log_mag = kLogZero; // ln|v|; ignored when is_zero
    bool is_zero = true;

    static SignedLogValue zero() { return {}; }
    static SignedLogValue make(int s, double lm) { return {s, lm, false}; }

    friend bool operator==(const SignedLogValue& a, const SignedLogValue& b) {
        if (a.is_zero || b.is_zero) return a.is_zero == b.is_zero;
        return a.sign == b.sign && a.log_mag == b.log_mag;
    }
};

inline SignedLogValue from_linear(double v) {
    if (!std::isfinite(v)) throw std::domain_error("from_linear: non-finite input");
    if (v == 0.0) return SignedLogValue::zero();
    return SignedLogValue::make(v > 0.0 ? 1 : -1, std::log(std::fabs(v)));
}

inline double to_linear(const SignedLogValue& v) {
    if (v.is_zero) return 0.0;
    return static_cast<double>(v.sign) * std::exp(v.log_mag);
}

// Product: signs combine by XOR, log-magnitudes add, zero absorbs.
inline SignedLogValue lns_mul(const SignedLogValue& a, const SignedLogValue& b) {
    if (a.is_zero || b.is_zero) return SignedLogValue::zero();
    return SignedLogValue::make(a.sign == b.sign ? 1 : -1, a.log_mag + b.log_mag);
}

// Sum. Equal signs use max*; opposite signs use the log-domain difference
//   max(La, Lb) + ln(1 - e^{-|La - Lb|})
// with the sign of the larger magnitude. Exact cancellation means bitwise
// equality of the log-magnitudes, not an epsilon, so that near-cancellation
// keeps its (correct) tiny result instead of collapsing to zero.
inline SignedLogValue lns_add(const SignedLogValue& a, const SignedLogValue& b) {
    if (a.is_zero) return b;
    if (b.is_zero) return a;
    if (a.sign == b.sign) return SignedLogValue::make(a.sign, max_star(a.log_mag, b.log_mag));
    if (a.log_mag == b.log_mag) return SignedLogValue::zero();
    const SignedLogValue& big = a.log_mag > b.log_mag ? a : b;
    const SignedLogValue& small = a.log_mag > b.log_mag ? b : a;
    const double delta = big.log_mag - small.log_mag;
    return SignedLogValue::make(big.sign, big.log_mag + log1m_exp(delta));
}

}  // namespace morphnet
