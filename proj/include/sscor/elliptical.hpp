#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

#include "sscor/types.hpp"

namespace sscor {

enum class Family { normal, student };

/// Bivariate elliptical sampling specification. The implied shape matrix is
///   V = [[a1^2, rho a1 a2], [rho a1 a2, a2^2]],
/// positive definite for |rho| < 1 and positive scales.
struct EllipticalSpec {
    Family family = Family::normal;
    double nu = 0.0;  ///< degrees of freedom (student only)
    double rho = 0.0;
    double a1 = 1.0;
    double a2 = 1.0;
    std::array<double, 2> mu{0.0, 0.0};
};

/// Seeding contract: (master_seed, stream_id) fully determines a sample.
/// Distinct stream ids give statistically independent streams, so parallel
/// replications reproduce bit-identically regardless of scheduling.
struct SeedSpec {
    std::uint64_t master_seed = 0;
    std::uint64_t stream_id = 0;
};

/// The shape matrix V implied by `spec`. Throws for |rho| >= 1 or
/// nonpositive scales.
SymMat shape_matrix(const EllipticalSpec& spec);

/// Draws n rows from the specified distribution:
///   normal:      mu + L z,             z iid standard normal,
///   student(nu): mu + L z / sqrt(g/nu), g ~ chi-square(nu), one g per row,
/// with L the lower Cholesky factor of V. The per-row draw order (z1, z2,
/// then g) is fixed, so output is bit-identical for a fixed SeedSpec.
SampleMatrix sample(const EllipticalSpec& spec, std::size_t n, const SeedSpec& seed);

}  // namespace sscor
