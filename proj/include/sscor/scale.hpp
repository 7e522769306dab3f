#pragma once

#include <span>

#include "sscor/types.hpp"

namespace sscor {

/// Consistency factors making the estimators Fisher-consistent for the
/// standard deviation at the normal model. Raw (uncorrected) values are the
/// default everywhere: the two-stage correlation standardizes both margins
/// with the same estimator, so any multiplicative constant cancels.
inline constexpr double kMadConsistency = 1.4826;
inline constexpr double kQnConsistency = 2.2219;

enum class ScaleKind { sd, mad, qn, qn_naive };

struct ScaleMethod {
    ScaleKind kind = ScaleKind::qn;
    bool consistency = false;  ///< apply the normal-consistency factor
};

/// Sample standard deviation (n-1 denominator, two-pass, compensated).
/// Requires n >= 2.
double sd(std::span<const double> x);

/// Median absolute deviation about the median; raw by default.
/// Requires a nonempty sample.
double mad(std::span<const double> x, bool consistency = false);

/// Rousseeuw–Croux Qn: the k-th order statistic of the n(n-1)/2 pairwise
/// absolute differences, k = h(h-1)/2 with h = floor(n/2) + 1. Raw by
/// default. O(n log n) via order-statistic selection over the implicit
/// matrix of pairwise differences of the sorted sample. Requires n >= 2.
double qn(std::span<const double> x, bool consistency = false);

/// Defining O(n^2 log n) implementation of the same statistic; returns the
/// identical value to qn() on every input. Kept as the reference oracle.
double qn_naive(std::span<const double> x, bool consistency = false);

/// Dispatch on ScaleMethod.
double estimate_scale(std::span<const double> x, ScaleMethod method);

}  // namespace sscor
