#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "sscor/types.hpp"

namespace sscor {

/// Kahan compensated accumulator. Summation error stays O(1) ulp of the
/// total independent of the number of terms.
class KahanSum {
public:
    void add(double x) {
        double y = x - c_;
        double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double value() const { return s_; }

private:
    double s_ = 0.0;
    double c_ = 0.0;
};

/// Standard normal quantile function (inverse CDF), accurate to full double
/// precision (Wichura's AS 241, PPND16). p must lie strictly inside (0,1).
double normal_quantile(double p);

/// Standard normal CDF via erfc.
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

/// Quantile of the chi-square distribution with one degree of freedom:
/// the square of the corresponding two-sided normal quantile.
inline double chi2_quantile_1df(double p) {
    double z = normal_quantile(0.5 + 0.5 * p);
    return z * z;
}

/// Survival function of chi-square with one degree of freedom,
/// P(T > t) = erfc(sqrt(t/2)).
inline double chi2_sf_1df(double t) { return std::erfc(std::sqrt(0.5 * t)); }

/// Median of a scratch buffer (reordered in place); even length averages the
/// two central order statistics.
inline double median_inplace(std::vector<double>& v) {
    if (v.empty()) throw InvalidInputError("median: empty sample");
    std::size_t n = v.size();
    std::size_t k = n / 2;
    std::nth_element(v.begin(), v.begin() + k, v.end());
    double upper = v[k];
    if (n % 2 == 1) return upper;
    double lower = *std::max_element(v.begin(), v.begin() + k);
    return (lower + upper) / 2.0;
}

inline double median_copy(std::span<const double> x) {
    std::vector<double> v(x.begin(), x.end());
    return median_inplace(v);
}

}  // namespace sscor
