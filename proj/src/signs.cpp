#include "sscor/signs.hpp"

#include <cmath>

#include "sscor/numeric.hpp"

namespace sscor {

void spatial_sign(const double* x, std::size_t p, double* out) {
    double norm;
    if (p == 2) {
        norm = std::hypot(x[0], x[1]);
    } else {
        double ss = 0.0;
        for (std::size_t j = 0; j < p; ++j) ss += x[j] * x[j];
        norm = std::sqrt(ss);
    }
    if (norm == 0.0) {
        for (std::size_t j = 0; j < p; ++j) out[j] = 0.0;
        return;
    }
    for (std::size_t j = 0; j < p; ++j) out[j] = x[j] / norm;
}

std::vector<double> spatial_sign(std::span<const double> x) {
    std::vector<double> out(x.size());
    spatial_sign(x.data(), x.size(), out.data());
    return out;
}

SymMat sscm(const SampleMatrix& X, const std::vector<double>& location) {
    const std::size_t n = X.rows();
    const std::size_t p = X.cols();
    if (location.size() != p)
        throw InvalidInputError("sscm: location dimension does not match data");

    std::vector<KahanSum> acc(p * (p + 1) / 2);
    std::vector<double> r(p), u(p);
    for (std::size_t i = 0; i < n; ++i) {
        const double* xi = X.row(i);
        for (std::size_t j = 0; j < p; ++j) r[j] = xi[j] - location[j];
        spatial_sign(r.data(), p, u.data());
        std::size_t idx = 0;
        for (std::size_t j = 0; j < p; ++j)
            for (std::size_t k = j; k < p; ++k) acc[idx++].add(u[j] * u[k]);
    }

    SymMat S(p);
    std::size_t idx = 0;
    const double inv_n = static_cast<double>(n);
    for (std::size_t j = 0; j < p; ++j)
        for (std::size_t k = j; k < p; ++k) S.set(j, k, acc[idx++].value() / inv_n);
    return S;
}

SymMat theoretical_sscm(double rho) {
    if (!(std::fabs(rho) <= 1.0))
        throw InvalidInputError("theoretical_sscm: |rho| <= 1 required");
    // delta = (1 - sqrt(1-rho^2)) / (2 rho) in the cancellation-free form.
    const double s = std::sqrt(1.0 - rho * rho);
    const double delta = rho / (2.0 * (1.0 + s));
    return SymMat::sym2(0.5, delta, 0.5);
}

AsymConstants asym_constants(double rho) {
    if (!(std::fabs(rho) <= 1.0))
        throw InvalidInputError("asym_constants: |rho| <= 1 required");
    AsymConstants c;
    c.rho = rho;
    if (std::fabs(rho) < 1e-7) {
        c.delta = 0.0;
        c.zeta = 0.25;
        c.alpha = 0.375;
        c.beta = 0.0;
        c.gamma = 0.125;
        c.w = 0.125;
        return c;
    }
    // Stable equivalents of the (1 - sqrt(1-rho^2))/rho^k forms.
    const double s = std::sqrt(1.0 - rho * rho);
    c.delta = rho / (2.0 * (1.0 + s));
    c.zeta = 1.0 / (2.0 * (1.0 + s));
    c.gamma = 1.0 / (4.0 * (1.0 + s));
    c.alpha = 0.5 - c.gamma;
    c.beta = 0.5 * c.delta;
    c.w = c.gamma - c.delta * c.delta;
    return c;
}

}  // namespace sscor
