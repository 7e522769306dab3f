#pragma once

#include <vector>

#include "sscor/types.hpp"

namespace sscor {

/// Componentwise sample median of the rows of X.
std::vector<double> coordinatewise_median(const SampleMatrix& X);

struct SpatialMedianOptions {
    double tol = 1e-10;  ///< relative step tolerance, scaled by the MAD of the centered row norms
    int max_iter = 500;
};

/// Spatial median: the minimizer of t -> sum_i ||X_i - t||.
///
/// Damped Weiszfeld iteration with the Vardi–Zhang rule when an iterate
/// coincides with data points: the iterate stays there only if the residual
/// gradient of the remaining points has norm (in units of unit vectors) at
/// most the multiplicity of the coincident point. The solve runs in the
/// frame centered at the coordinatewise median, which also serves as the
/// starting point. Throws ConvergenceError (carrying the last iterate and
/// relative residual) if max_iter is exhausted.
std::vector<double> spatial_median(const SampleMatrix& X, SpatialMedianOptions opts = {});

enum class LocationKind { spatial_median, coordinatewise_median, fixed };

struct LocationMethod {
    LocationKind kind = LocationKind::spatial_median;
    std::vector<double> fixed_value;  ///< used when kind == fixed
};

std::vector<double> estimate_location(const SampleMatrix& X, const LocationMethod& method);

}  // namespace sscor
