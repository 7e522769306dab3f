#pragma once

#include <array>
#include <cstddef>

#include "sscor/location.hpp"
#include "sscor/scale.hpp"
#include "sscor/signs.hpp"
#include "sscor/types.hpp"

namespace sscor {

/// Maps a bivariate SSCM to the generalized correlation coefficient of the
/// underlying elliptical distribution. Validates the argument (diagonal in
/// [0,1] and trace at most 1, both with 1e-9 grace; |s12| <= 1/2 + 1e-9).
/// Rank-degenerate inputs (d(1-d) < 1e-12) map to sign(s12) * 1, or 0 when
/// s12 = 0. The result is clamped to [-1, 1].
double rho_from_sscm(const SymMat& S);

/// Asymptotic variance of sqrt(n)(rho_hat - rho) for the one-stage spatial
/// sign correlation at an elliptical with scale ratio a = a1/a2:
///   (1-rho^2)^2 + (a + 1/a)/2 * (1-rho^2)^(3/2).
double asv_one_stage(double rho, double a);

/// Asymptotic variance for the two-stage estimator (margins standardized
/// first); the scale ratio drops out:
///   (1-rho^2)^2 + (1-rho^2)^(3/2).
double asv_two_stage(double rho);

/// Variance-stabilizing transformation h for the two-stage estimator:
/// h'(x) = asv_two_stage(x)^(-1/2), h(0) = 0, h(+-1) = +-pi/sqrt(2).
double vst(double x);

/// Inverse of vst on [-pi/sqrt2, pi/sqrt2]. Out-of-range inputs are clamped;
/// when `clamped` is non-null it is set accordingly (used to flag confidence
/// intervals that hit the boundary).
double vst_inv(double y, bool* clamped = nullptr);

enum class EstimatorKind { one_stage, two_stage, pearson };

struct CorrEstimate {
    double rho_hat;
    std::size_t n;
    EstimatorKind kind;
    ScaleMethod scale_method;    ///< meaningful for two_stage
    LocationMethod location_method;
    SymMat sscm;                 ///< the 2x2 sign covariance behind the estimate
    std::array<double, 2> scales{1.0, 1.0};  ///< marginal scale estimates (two_stage)
    std::array<double, 2> location{0.0, 0.0};  ///< location estimate, original units
};

/// One-stage spatial sign correlation: SSCM of the raw data around the
/// estimated location, inverted through rho_from_sscm. Requires n >= 2, p = 2.
CorrEstimate sscor_one_stage(const SampleMatrix& X, const LocationMethod& location = {});

/// Two-stage spatial sign correlation: each column is standardized by the
/// scale estimate (computed on the median-centered column; raw Qn by
/// default), the location is then estimated on the standardized data, and
/// the SSCM of the standardized residuals is inverted to rho_hat.
/// A zero scale estimate raises DegenerateScaleError with the column index.
CorrEstimate sscor_two_stage(const SampleMatrix& X, ScaleMethod scale = {},
                             const LocationMethod& location = {});

enum class IntervalMethod { plain, h_transform, z_transform };

struct ConfInterval {
    double lo;
    double hi;
    double level;
    IntervalMethod method;
    EstimatorKind estimator = EstimatorKind::two_stage;
    bool clamped = false;      ///< an endpoint was truncated at the parameter boundary
    bool var_floored = false;  ///< a nonpositive variance factor was floored (ci_pearson)
};

/// Asymptotic confidence interval for rho from a two-stage estimate.
///   plain:       rho_hat +- z * sqrt(asv_two_stage(rho_hat)/n), clamped to [-1,1]
///   h_transform: vst_inv(vst(rho_hat) +- z/sqrt(n))
ConfInterval confidence_interval(const CorrEstimate& est, double level = 0.95,
                                 IntervalMethod method = IntervalMethod::h_transform);

struct TestResult {
    double statistic;  ///< compared against the chi-square(1) quantile
    double p_value;
    double alpha;
    bool reject;
    int df = 1;
};

/// Two-sided one-sample test of rho = rho0:
/// T = n (vst(rho_hat) - vst(rho0))^2, rejected iff T exceeds the
/// (1-alpha) chi-square(1) quantile; p = erfc(sqrt(T/2)).
TestResult test_one_sample(const CorrEstimate& est, double rho0, double alpha = 0.05);

/// Two-sided two-sample test of equal generalized correlation:
/// T = n1 n2/(n1+n2) * (vst(rho1) - vst(rho2))^2.
TestResult test_two_sample(const CorrEstimate& a, const CorrEstimate& b, double alpha = 0.05);

}  // namespace sscor
