#pragma once

#include <cstddef>

#include "sscor/correlation.hpp"
#include "sscor/types.hpp"

namespace sscor {

/// Multivariate excess-kurtosis estimate:
///   kappa_hat = 3/(p(p+2)) * n^-1 sum_i d_i^4 - 3,
/// with d_i^2 the Mahalanobis distance under the (n-1)-denominator sample
/// covariance. Zero in the Gaussian limit; 6/(nu-4) for Student-t (nu > 4).
struct KurtosisEstimate {
    double kappa_hat;
    std::size_t n;
    std::size_t p;
};

/// Product-moment correlation of the two columns (two-pass).
/// Throws DegenerateScaleError for a constant column.
double pearson_corr(const SampleMatrix& X);

/// Fisher's z-transform, x -> log((1+x)/(1-x))/2; domain |x| < 1.
double fisher_z(double x);

/// Inverse of fisher_z (tanh); maps the real line into (-1, 1).
double fisher_z_inv(double y);

/// Kurtosis estimate from an n x p sample, n > p. Throws InvalidInputError
/// when the sample covariance is singular.
KurtosisEstimate kurtosis_mv(const SampleMatrix& X);

/// Kurtosis-adjusted confidence interval for the Pearson correlation.
///   plain:       rho_hat +- z * sqrt((1+kappa/3) (1-rho_hat^2)^2 / n), clamped
///   z_transform: fisher_z_inv(fisher_z(rho_hat) +- z * sqrt((1+kappa/3)/n))
/// A nonpositive variance factor 1+kappa/3 is floored at 1e-6 and the
/// interval is flagged via var_floored. |rho_hat| = 1 yields the degenerate
/// point interval for the z-transform (fisher_z diverges there).
ConfInterval ci_pearson(double rho_hat, double kappa_hat, std::size_t n, double level,
                        IntervalMethod method);

}  // namespace sscor
