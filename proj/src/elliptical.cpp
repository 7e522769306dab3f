#include "sscor/elliptical.hpp"

#include <cmath>

#include "sscor/rng.hpp"

namespace sscor {

namespace {

void validate(const EllipticalSpec& spec) {
    if (!(std::fabs(spec.rho) < 1.0))
        throw InvalidInputError("elliptical: |rho| < 1 required");
    if (!(spec.a1 > 0.0 && spec.a2 > 0.0))
        throw InvalidInputError("elliptical: scales must be positive");
    if (!(std::isfinite(spec.mu[0]) && std::isfinite(spec.mu[1])))
        throw InvalidInputError("elliptical: non-finite location");
    if (spec.family == Family::student && !(spec.nu > 0.0))
        throw InvalidInputError("elliptical: student degrees of freedom must be positive");
}

}  // namespace

SymMat shape_matrix(const EllipticalSpec& spec) {
    validate(spec);
    return SymMat::sym2(spec.a1 * spec.a1, spec.rho * spec.a1 * spec.a2, spec.a2 * spec.a2);
}

SampleMatrix sample(const EllipticalSpec& spec, std::size_t n, const SeedSpec& seed) {
    validate(spec);
    if (n < 1) throw InvalidInputError("sample: n >= 1 required");

    rng::Stream gen(seed.master_seed, seed.stream_id);
    const double s = std::sqrt((1.0 - spec.rho) * (1.0 + spec.rho));
    const bool student = spec.family == Family::student;

    SampleMatrix X(n, 2);
    for (std::size_t i = 0; i < n; ++i) {
        const double z1 = gen.next_normal();
        const double z2 = gen.next_normal();
        double radial = 1.0;
        if (student) radial = 1.0 / std::sqrt(gen.next_chisq(spec.nu) / spec.nu);
        X(i, 0) = spec.mu[0] + spec.a1 * z1 * radial;
        X(i, 1) = spec.mu[1] + spec.a2 * (spec.rho * z1 + s * z2) * radial;
    }
    return X;
}

}  // namespace sscor
