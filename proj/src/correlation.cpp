#include "sscor/correlation.hpp"

#include <cmath>

#include "sscor/numeric.hpp"

namespace sscor {

namespace {

constexpr double kPi = 3.14159265358979323846;
const double kVstBound = kPi / std::sqrt(2.0);

void require_bivariate(const SampleMatrix& X, const char* who) {
    if (X.cols() != 2)
        throw InvalidInputError(std::string(who) + ": exactly two columns required");
    if (X.rows() < 2)
        throw InvalidInputError(std::string(who) + ": need at least two observations");
}

}  // namespace

double rho_from_sscm(const SymMat& S) {
    if (S.dim() != 2) throw InvalidInputError("rho_from_sscm: 2x2 matrix required");
    const double s11 = S(0, 0);
    const double s12 = S(0, 1);
    const double s22 = S(1, 1);
    const double tol = 1e-9;
    if (!(std::isfinite(s11) && std::isfinite(s12) && std::isfinite(s22)))
        throw InvalidInputError("rho_from_sscm: non-finite entry");
    if (s11 < -tol || s11 > 1.0 + tol || s22 < -tol || s22 > 1.0 + tol)
        throw InvalidInputError("rho_from_sscm: diagonal outside [0,1]");
    if (s11 + s22 > 1.0 + tol)
        throw InvalidInputError("rho_from_sscm: trace exceeds 1");
    if (std::fabs(s12) > 0.5 + tol)
        throw InvalidInputError("rho_from_sscm: off-diagonal exceeds 1/2");

    if (s12 == 0.0) return 0.0;

    const double u = s11 - 0.5;
    const double r = std::hypot(u, s12);
    const double d = 0.5 + r;
    if (d * (1.0 - d) < 1e-12) return s12 > 0.0 ? 1.0 : -1.0;

    // b = d - s11 = r - u, computed without cancellation when u > 0.
    const double b = (u > 0.0) ? (s12 * s12) / (r + u) : (r - u);
    const double c = (2.0 * d - 1.0) / (d * (1.0 - d));
    const double num = c * s12 * b;
    const double q = s12 * s12 + b * b;
    const double rho = num / std::sqrt(q * q + num * num);
    return std::fmin(1.0, std::fmax(-1.0, rho));
}

double asv_one_stage(double rho, double a) {
    if (!(std::fabs(rho) <= 1.0))
        throw InvalidInputError("asv_one_stage: |rho| <= 1 required");
    if (!(a > 0.0)) throw InvalidInputError("asv_one_stage: scale ratio must be positive");
    const double t = 1.0 - rho * rho;
    return t * t + 0.5 * (a + 1.0 / a) * t * std::sqrt(t);
}

double asv_two_stage(double rho) {
    if (!(std::fabs(rho) <= 1.0))
        throw InvalidInputError("asv_two_stage: |rho| <= 1 required");
    const double t = 1.0 - rho * rho;
    return t * t + t * std::sqrt(t);
}

double vst(double x) {
    if (!(std::fabs(x) <= 1.0)) throw InvalidInputError("vst: |x| <= 1 required");
    const double ax = std::fabs(x);
    const double s = std::sqrt((1.0 - ax) * (1.0 + ax));
    // z = 1 - sqrt(1-x^2) without cancellation near zero.
    const double z = ax * ax / (1.0 + s);
    const double val = std::asin((3.0 * z - 2.0) / (s + 1.0)) / std::sqrt(2.0) +
                       kPi / (2.0 * std::sqrt(2.0));
    return x < 0.0 ? -val : val;
}

double vst_inv(double y, bool* clamped) {
    if (!std::isfinite(y)) throw InvalidInputError("vst_inv: non-finite input");
    bool hit = false;
    if (y > kVstBound) {
        y = kVstBound;
        hit = true;
    } else if (y < -kVstBound) {
        y = -kVstBound;
        hit = true;
    }
    if (clamped) *clamped = hit;
    const double ay = std::fabs(y);
    // 2^{3/2} sqrt(1-cos(sqrt2 y)) = 4 |sin(y/sqrt2)| via the half-angle
    // identity, avoiding the cancellation in 1-cos near zero.
    const double val = 4.0 * std::sin(ay / std::sqrt(2.0)) /
                       (3.0 - std::cos(std::sqrt(2.0) * ay));
    const double out = y < 0.0 ? -val : val;
    return std::fmin(1.0, std::fmax(-1.0, out));
}

CorrEstimate sscor_one_stage(const SampleMatrix& X, const LocationMethod& location) {
    require_bivariate(X, "sscor_one_stage");
    std::vector<double> t = estimate_location(X, location);
    SymMat S = sscm(X, t);
    CorrEstimate est{rho_from_sscm(S), X.rows(), EstimatorKind::one_stage,
                     ScaleMethod{},    location,  S,
                     {1.0, 1.0},       {t[0], t[1]}};
    return est;
}

CorrEstimate sscor_two_stage(const SampleMatrix& X, ScaleMethod scale,
                             const LocationMethod& location) {
    require_bivariate(X, "sscor_two_stage");
    const std::size_t n = X.rows();

    // Center each column at its median before everything else. The scale
    // estimators below are shift-invariant, so this does not change the
    // estimator; it makes exact input shifts cancel before any division.
    std::array<double, 2> med;
    std::array<double, 2> sigma;
    SampleMatrix Z(n, 2);
    {
        std::vector<double> col(n);
        for (std::size_t j = 0; j < 2; ++j) {
            for (std::size_t i = 0; i < n; ++i) col[i] = X(i, j);
            std::vector<double> tmp = col;
            med[j] = median_inplace(tmp);
            for (std::size_t i = 0; i < n; ++i) col[i] -= med[j];
            sigma[j] = estimate_scale(col, scale);
            if (!(sigma[j] > 0.0)) throw DegenerateScaleError(j);
            for (std::size_t i = 0; i < n; ++i) Z(i, j) = col[i] / sigma[j];
        }
    }

    std::vector<double> t = estimate_location(Z, location);
    SymMat S = sscm(Z, t);
    CorrEstimate est{rho_from_sscm(S),
                     n,
                     EstimatorKind::two_stage,
                     scale,
                     location,
                     S,
                     {sigma[0], sigma[1]},
                     {med[0] + t[0] * sigma[0], med[1] + t[1] * sigma[1]}};
    return est;
}

ConfInterval confidence_interval(const CorrEstimate& est, double level, IntervalMethod method) {
    if (!(level > 0.0 && level < 1.0))
        throw InvalidInputError("confidence_interval: level must be in (0,1)");
    const double z = normal_quantile(0.5 + 0.5 * level);
    const double sqn = std::sqrt(static_cast<double>(est.n));

    if (method == IntervalMethod::plain) {
        const double margin = z * std::sqrt(asv_two_stage(est.rho_hat)) / sqn;
        double lo = est.rho_hat - margin;
        double hi = est.rho_hat + margin;
        bool clamped = false;
        if (lo < -1.0) { lo = -1.0; clamped = true; }
        if (hi > 1.0) { hi = 1.0; clamped = true; }
        return ConfInterval{lo, hi, level, method, est.kind, clamped};
    }
    if (method == IntervalMethod::h_transform) {
        const double center = vst(est.rho_hat);
        bool cl = false, ch = false;
        const double lo = vst_inv(center - z / sqn, &cl);
        const double hi = vst_inv(center + z / sqn, &ch);
        return ConfInterval{lo, hi, level, method, est.kind, cl || ch};
    }
    throw InvalidInputError("confidence_interval: unsupported method for this estimator");
}

TestResult test_one_sample(const CorrEstimate& est, double rho0, double alpha) {
    if (!(std::fabs(rho0) <= 1.0))
        throw InvalidInputError("test_one_sample: |rho0| <= 1 required");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw InvalidInputError("test_one_sample: alpha must be in (0,1)");
    const double diff = vst(est.rho_hat) - vst(rho0);
    const double statistic = static_cast<double>(est.n) * diff * diff;
    const double p = chi2_sf_1df(statistic);
    return TestResult{statistic, p, alpha, statistic > chi2_quantile_1df(1.0 - alpha)};
}

TestResult test_two_sample(const CorrEstimate& a, const CorrEstimate& b, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw InvalidInputError("test_two_sample: alpha must be in (0,1)");
    const double n1 = static_cast<double>(a.n);
    const double n2 = static_cast<double>(b.n);
    const double diff = vst(a.rho_hat) - vst(b.rho_hat);
    const double statistic = n1 * n2 / (n1 + n2) * diff * diff;
    const double p = chi2_sf_1df(statistic);
    return TestResult{statistic, p, alpha, statistic > chi2_quantile_1df(1.0 - alpha)};
}

}  // namespace sscor
