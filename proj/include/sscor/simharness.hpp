#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "sscor/correlation.hpp"
#include "sscor/elliptical.hpp"

namespace sscor {

/// A named distribution of the experiment grid ("normal", "t5", "t3", ...).
struct DistFamily {
    Family family = Family::normal;
    double nu = 0.0;
    std::string label = "normal";
};

DistFamily dist_normal();
DistFamily dist_t(double nu);
/// Accepts "normal"/"gauss" or "t<nu>" (e.g. "t3", "t5").
DistFamily parse_dist(const std::string& name);

/// The four confidence-interval constructions of the study: the two-stage
/// spatial sign correlation with the plain (sscor) and variance-stabilized
/// (sscor-h) interval, and the Pearson benchmark with the plain
/// kurtosis-adjusted (cor) and z-transformed (cor-z) interval.
enum class CiEstimator { sscor, sscor_h, cor, cor_z };

const char* estimator_name(CiEstimator e);
CiEstimator parse_estimator(const std::string& name);

struct ExperimentConfig {
    std::vector<DistFamily> distributions;
    std::vector<double> rhos;
    std::vector<std::size_t> ns;  ///< each >= 10 (inference-path requirement)
    std::size_t reps = 10000;
    double level = 0.95;
    std::vector<CiEstimator> estimators;
    std::uint64_t master_seed = 1;
    unsigned threads = 0;  ///< 0 = hardware concurrency
    ScaleMethod scale{};
    LocationMethod location{};
};

/// One grid cell x estimator. `reps_used + failures` equals the configured
/// replication count; averages are over the successful replications.
struct ExperimentRow {
    std::string dist;
    double rho;
    std::size_t n;
    std::string estimator;
    double coverage_pct;
    double mc_se;  ///< SE of the reported statistic: coverage (pp) or length
    double avg_len_sqrt_n;
    std::size_t reps_used;
    std::size_t failures;
};

/// Coverage study: every replication draws one sample per cell, shares it
/// across estimators, and checks whether each interval contains the true
/// rho. mc_se carries the binomial coverage SE in percentage points.
std::vector<ExperimentRow> run_coverage(const ExperimentConfig& config);

/// Length study: identical computation, but mc_se carries the SE of the
/// mean interval length (already scaled by sqrt(n)).
std::vector<ExperimentRow> run_length(const ExperimentConfig& config);

/// CSV serialization (header + one line per row, 6 significant digits).
std::string to_csv(const std::vector<ExperimentRow>& rows);

/// Wide layout for visual diffing: one line per (dist, rho, estimator),
/// one column per n; coverage by default, lengths when `lengths` is set.
std::string to_table(const std::vector<ExperimentRow>& rows, bool lengths);

struct AsymEntry {
    std::string name;
    double empirical;
    double expected;
    double mc_se;    ///< standard error of the empirical value
    double rel_err;  ///< |empirical/expected - 1| (0 when expected is 0)
};

/// Monte Carlo verification of the asymptotic constants at an equal-scale
/// elliptical population: the variance of sqrt(n)(rho_hat - rho) against
/// asv_two_stage, the variance of sqrt(n)(s12_hat - delta) against w, and
/// the fourth-order sign moments against (alpha, beta, gamma).
struct AsymptoticsReport {
    std::string dist;
    double rho;
    std::size_t n;
    std::size_t reps;
    std::uint64_t master_seed;
    std::vector<AsymEntry> entries;
    double identity_gap;  ///< alpha + gamma - mean((s1)^2); shared-term identity
    std::size_t failures;
};

AsymptoticsReport verify_asymptotics(double rho, std::size_t n, std::size_t reps,
                                     std::uint64_t master_seed,
                                     const DistFamily& dist = dist_normal(),
                                     unsigned threads = 0);

std::string format_report(const AsymptoticsReport& report);

}  // namespace sscor
