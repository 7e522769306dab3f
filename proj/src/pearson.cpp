#include "sscor/pearson.hpp"

#include <cmath>
#include <vector>

#include "sscor/numeric.hpp"

namespace sscor {

double pearson_corr(const SampleMatrix& X) {
    if (X.cols() != 2) throw InvalidInputError("pearson_corr: exactly two columns required");
    const std::size_t n = X.rows();
    if (n < 2) throw InvalidInputError("pearson_corr: need at least two observations");

    KahanSum mx, my;
    for (std::size_t i = 0; i < n; ++i) {
        mx.add(X(i, 0));
        my.add(X(i, 1));
    }
    const double xbar = mx.value() / static_cast<double>(n);
    const double ybar = my.value() / static_cast<double>(n);

    KahanSum sxx, syy, sxy;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = X(i, 0) - xbar;
        const double dy = X(i, 1) - ybar;
        sxx.add(dx * dx);
        syy.add(dy * dy);
        sxy.add(dx * dy);
    }
    if (!(sxx.value() > 0.0)) throw DegenerateScaleError(0);
    if (!(syy.value() > 0.0)) throw DegenerateScaleError(1);
    const double r = sxy.value() / std::sqrt(sxx.value() * syy.value());
    return std::fmin(1.0, std::fmax(-1.0, r));
}

double fisher_z(double x) {
    if (!(std::fabs(x) < 1.0)) throw InvalidInputError("fisher_z: |x| < 1 required");
    return std::atanh(x);
}

double fisher_z_inv(double y) {
    if (!std::isfinite(y)) throw InvalidInputError("fisher_z_inv: non-finite input");
    return std::tanh(y);
}

KurtosisEstimate kurtosis_mv(const SampleMatrix& X) {
    const std::size_t n = X.rows();
    const std::size_t p = X.cols();
    if (n <= p) throw InvalidInputError("kurtosis_mv: need more observations than columns");

    std::vector<double> mean(p, 0.0);
    for (std::size_t j = 0; j < p; ++j) {
        KahanSum s;
        for (std::size_t i = 0; i < n; ++i) s.add(X(i, j));
        mean[j] = s.value() / static_cast<double>(n);
    }

    // Sample covariance, n-1 denominator, packed lower triangle by row.
    std::vector<double> cov(p * (p + 1) / 2, 0.0);
    {
        std::size_t idx = 0;
        for (std::size_t j = 0; j < p; ++j) {
            for (std::size_t k = 0; k <= j; ++k, ++idx) {
                KahanSum s;
                for (std::size_t i = 0; i < n; ++i)
                    s.add((X(i, j) - mean[j]) * (X(i, k) - mean[k]));
                cov[idx] = s.value() / static_cast<double>(n - 1);
            }
        }
    }

    // Cholesky of the covariance (lower triangle, in place).
    std::vector<double> L = cov;
    for (std::size_t j = 0; j < p; ++j) {
        const std::size_t jj = j * (j + 1) / 2;
        double d = L[jj + j];
        for (std::size_t k = 0; k < j; ++k) d -= L[jj + k] * L[jj + k];
        if (!(d > 0.0)) throw InvalidInputError("kurtosis_mv: singular sample covariance");
        const double ljj = std::sqrt(d);
        L[jj + j] = ljj;
        for (std::size_t i = j + 1; i < p; ++i) {
            const std::size_t ii = i * (i + 1) / 2;
            double v = L[ii + j];
            for (std::size_t k = 0; k < j; ++k) v -= L[ii + k] * L[jj + k];
            L[ii + j] = v / ljj;
        }
    }

    KahanSum quad;
    std::vector<double> y(p);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < p; ++j) {
            double v = X(i, j) - mean[j];
            const std::size_t jj = j * (j + 1) / 2;
            for (std::size_t k = 0; k < j; ++k) v -= L[jj + k] * y[k];
            y[j] = v / L[jj + j];
        }
        double d2 = 0.0;
        for (std::size_t j = 0; j < p; ++j) d2 += y[j] * y[j];
        quad.add(d2 * d2);
    }

    const double pf = static_cast<double>(p);
    const double kappa =
        3.0 / (pf * (pf + 2.0)) * quad.value() / static_cast<double>(n) - 3.0;
    return KurtosisEstimate{kappa, n, p};
}

ConfInterval ci_pearson(double rho_hat, double kappa_hat, std::size_t n, double level,
                        IntervalMethod method) {
    if (!(std::fabs(rho_hat) <= 1.0))
        throw InvalidInputError("ci_pearson: |rho_hat| <= 1 required");
    if (!std::isfinite(kappa_hat)) throw InvalidInputError("ci_pearson: non-finite kurtosis");
    if (n < 3) throw InvalidInputError("ci_pearson: n >= 3 required");
    if (!(level > 0.0 && level < 1.0))
        throw InvalidInputError("ci_pearson: level must be in (0,1)");

    double factor = 1.0 + kappa_hat / 3.0;
    bool floored = false;
    if (!(factor > 0.0)) {
        factor = 1e-6;
        floored = true;
    }
    const double z = normal_quantile(0.5 + 0.5 * level);
    const double sqn = std::sqrt(static_cast<double>(n));

    if (method == IntervalMethod::plain) {
        const double t = 1.0 - rho_hat * rho_hat;
        const double margin = z * std::sqrt(factor * t * t) / sqn;
        double lo = rho_hat - margin;
        double hi = rho_hat + margin;
        bool clamped = false;
        if (lo < -1.0) { lo = -1.0; clamped = true; }
        if (hi > 1.0) { hi = 1.0; clamped = true; }
        return ConfInterval{lo, hi, level, method, EstimatorKind::pearson, clamped, floored};
    }
    if (method == IntervalMethod::z_transform) {
        if (std::fabs(rho_hat) == 1.0)
            return ConfInterval{rho_hat, rho_hat, level,   method,
                                EstimatorKind::pearson, false, floored};
        const double center = fisher_z(rho_hat);
        const double half = z * std::sqrt(factor) / sqn;
        return ConfInterval{fisher_z_inv(center - half), fisher_z_inv(center + half),
                            level,  method, EstimatorKind::pearson,
                            false,  floored};
    }
    throw InvalidInputError("ci_pearson: unsupported method for this estimator");
}

}  // namespace sscor
