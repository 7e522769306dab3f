#include "sscor/location.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "sscor/numeric.hpp"
#include "sscor/scale.hpp"

namespace sscor {

std::vector<double> coordinatewise_median(const SampleMatrix& X) {
    const std::size_t p = X.cols();
    std::vector<double> med(p);
    std::vector<double> buf(X.rows());
    for (std::size_t j = 0; j < p; ++j) {
        for (std::size_t i = 0; i < X.rows(); ++i) buf[i] = X(i, j);
        med[j] = median_inplace(buf);
    }
    return med;
}

namespace {

double norm_of(const double* v, std::size_t p) {
    if (p == 2) return std::hypot(v[0], v[1]);
    double ss = 0.0;
    for (std::size_t j = 0; j < p; ++j) ss += v[j] * v[j];
    return std::sqrt(ss);
}

}  // namespace

std::vector<double> spatial_median(const SampleMatrix& X, SpatialMedianOptions opts) {
    const std::size_t n = X.rows();
    const std::size_t p = X.cols();
    if (n == 0) throw InvalidInputError("spatial_median: empty sample");
    if (!(opts.tol > 0.0) || opts.max_iter < 1)
        throw InvalidInputError("spatial_median: invalid options");

    const std::vector<double> m = coordinatewise_median(X);

    // Work in the frame centered at the coordinatewise median. Besides the
    // conditioning benefit, exact shifts of the input then cancel before any
    // division, which keeps the two-stage estimator exactly shift-stable.
    std::vector<double> w(n * p);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < p; ++j) w[i * p + j] = X(i, j) - m[j];

    // Unit of length for the stopping rule: MAD of the centered row norms,
    // falling back to their median, then their maximum, for flat geometries.
    std::vector<double> norms(n);
    for (std::size_t i = 0; i < n; ++i) norms[i] = norm_of(&w[i * p], p);
    double scale = mad(norms);
    if (scale <= 0.0) scale = median_copy(norms);
    if (scale <= 0.0) scale = *std::max_element(norms.begin(), norms.end());
    if (scale <= 0.0) return m;  // all rows identical

    std::vector<double> y(p, 0.0), ynew(p), ynt(p), tw(p), resid(p), diff(p), ra(p);
    double residual = 0.0;
    bool converged = false;

    // Objective in the centered frame, used to safeguard the Newton step.
    auto objective = [&](const std::vector<double>& t) {
        KahanSum s;
        for (std::size_t i = 0; i < n; ++i) {
            const double* wi = &w[i * p];
            for (std::size_t j = 0; j < p; ++j) diff[j] = wi[j] - t[j];
            s.add(norm_of(diff.data(), p));
        }
        return s.value();
    };

    for (int iter = 0; iter < opts.max_iter && !converged; ++iter) {
        // Split rows into anchors (coinciding with y) and the rest.
        std::size_t eta = 0;
        double inv_sum = 0.0;
        double hxx = 0.0, hxy = 0.0, hyy = 0.0;  // Hessian terms (p == 2)
        std::fill(tw.begin(), tw.end(), 0.0);
        std::fill(resid.begin(), resid.end(), 0.0);
        double dmin = std::numeric_limits<double>::infinity();
        std::size_t imin = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double* wi = &w[i * p];
            for (std::size_t j = 0; j < p; ++j) diff[j] = wi[j] - y[j];
            const double d = norm_of(diff.data(), p);
            if (d < dmin) {
                dmin = d;
                imin = i;
            }
            if (d <= scale * 1e-15) {
                ++eta;
                continue;
            }
            inv_sum += 1.0 / d;
            for (std::size_t j = 0; j < p; ++j) {
                tw[j] += wi[j] / d;
                resid[j] += diff[j] / d;
            }
            if (p == 2) {
                const double ux = diff[0] / d, uy = diff[1] / d;
                hxx += (1.0 - ux * ux) / d;
                hxy -= ux * uy / d;
                hyy += (1.0 - uy * uy) / d;
            }
        }

        if (eta == n) {
            converged = true;  // every point coincides with the iterate
            break;
        }

        if (eta == 0 && dmin <= 0.05 * scale) {
            // Vardi–Zhang data-point test on the nearest observation: a point
            // of multiplicity eta_a minimizes the objective exactly when the
            // unit-vector pull of the remaining points has norm at most
            // eta_a. Certifying it directly matters because the plain
            // iteration approaches such minimizers at a linear rate that
            // comes arbitrarily close to 1 as the pull nears critical.
            const double* a = &w[imin * p];
            std::size_t eta_a = 0;
            std::fill(ra.begin(), ra.end(), 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                const double* wi = &w[i * p];
                for (std::size_t j = 0; j < p; ++j) diff[j] = wi[j] - a[j];
                const double d = norm_of(diff.data(), p);
                if (d <= scale * 1e-15) {
                    ++eta_a;
                    continue;
                }
                for (std::size_t j = 0; j < p; ++j) ra[j] += diff[j] / d;
            }
            if (norm_of(ra.data(), p) <= static_cast<double>(eta_a)) {
                for (std::size_t j = 0; j < p; ++j) y[j] = a[j];
                converged = true;
                break;
            }
        }

        if (eta > 0) {
            // Vardi–Zhang: an iterate sitting on data points stays there only
            // if the residual pull of the remaining points, measured in unit
            // vectors, does not exceed the multiplicity.
            const double r = norm_of(resid.data(), p);
            if (r <= static_cast<double>(eta)) {
                converged = true;
                break;
            }
            const double lam = std::min(1.0, static_cast<double>(eta) / r);
            for (std::size_t j = 0; j < p; ++j)
                ynew[j] = (1.0 - lam) * (tw[j] / inv_sum) + lam * y[j];
        } else {
            for (std::size_t j = 0; j < p; ++j) ynew[j] = tw[j] / inv_sum;
            if (p == 2) {
                // Newton candidate from the exact Hessian, taken only when the
                // solve is well-posed and the objective does not lose to the
                // Weiszfeld candidate. That keeps the monotone global descent
                // of the plain iteration but converges quadratically where
                // Weiszfeld alone crawls (optimum hugging a data point).
                const double det = hxx * hyy - hxy * hxy;
                const double hmax = std::max({std::fabs(hxx), std::fabs(hxy), std::fabs(hyy)});
                if (det > hmax * hmax * 1e-14) {
                    ynt[0] = y[0] + (hyy * resid[0] - hxy * resid[1]) / det;
                    ynt[1] = y[1] + (hxx * resid[1] - hxy * resid[0]) / det;
                    if (objective(ynt) <= objective(ynew)) ynew = ynt;
                }
            }
        }

        for (std::size_t j = 0; j < p; ++j) diff[j] = ynew[j] - y[j];
        residual = norm_of(diff.data(), p) / scale;
        y = ynew;
        if (residual <= opts.tol) converged = true;
    }

    if (!converged) {
        std::vector<double> last(p);
        for (std::size_t j = 0; j < p; ++j) last[j] = m[j] + y[j];
        throw ConvergenceError(std::move(last), residual, opts.max_iter);
    }
    std::vector<double> out(p);
    for (std::size_t j = 0; j < p; ++j) out[j] = m[j] + y[j];
    return out;
}

std::vector<double> estimate_location(const SampleMatrix& X, const LocationMethod& method) {
    switch (method.kind) {
        case LocationKind::spatial_median: return spatial_median(X);
        case LocationKind::coordinatewise_median: return coordinatewise_median(X);
        case LocationKind::fixed:
            if (method.fixed_value.size() != X.cols())
                throw InvalidInputError("estimate_location: fixed location has wrong dimension");
            return method.fixed_value;
    }
    throw InvalidInputError("estimate_location: unknown method");
}

}  // namespace sscor
