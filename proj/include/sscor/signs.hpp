#pragma once

#include <span>
#include <vector>

#include "sscor/types.hpp"

namespace sscor {

/// Spatial sign s(x) = x/||x||, with s(0) = 0. Writes p entries to `out`.
void spatial_sign(const double* x, std::size_t p, double* out);

/// Convenience overload for tests and small inputs.
std::vector<double> spatial_sign(std::span<const double> x);

/// Empirical spatial sign covariance matrix of the rows of X around the
/// given location: mean of s(X_i - t) s(X_i - t)^T, accumulated entrywise
/// with compensated summation. Rows equal to t contribute zero, so the trace
/// equals (number of rows != t)/n up to roundoff.
SymMat sscm(const SampleMatrix& X, const std::vector<double>& location);

/// Population SSCM of a bivariate elliptical distribution with equal
/// marginal scales and generalized correlation rho:
///   [[1/2, delta], [delta, 1/2]],  delta = rho / (2(1 + sqrt(1-rho^2))),
/// which equals (1 - sqrt(1-rho^2))/(2 rho) for rho != 0 and is continuous
/// (delta = 0) at rho = 0.
SymMat theoretical_sscm(double rho);

/// Closed-form fourth-moment constants of the spatial sign of an equal-scale
/// bivariate elliptical distribution. With u = s(X - mu):
///   delta = E[u1 u2],     zeta  = such that E[u u^T] offdiag scaling holds,
///   alpha = E[u1^4],      beta  = E[u1^3 u2],   gamma = E[u1^2 u2^2],
///   w     = Var(u1 u2) = gamma - delta^2.
/// Members satisfy alpha + gamma = 1/2, zeta = 2 gamma, beta = delta/2.
struct AsymConstants {
    double rho;
    double delta;
    double zeta;
    double alpha;
    double beta;
    double gamma;
    double w;
};

/// Evaluate the constants above; |rho| <= 1 required. Near zero (|rho| < 1e-7)
/// the exact rho -> 0 limits are returned (delta=0, zeta=1/4, alpha=3/8,
/// beta=0, gamma=1/8, w=1/8); elsewhere cancellation-free closed forms are
/// used, so the values are continuous through rho = 0.
AsymConstants asym_constants(double rho);

}  // namespace sscor
