#include "sscor/simharness.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <limits>
#include <thread>
#include <utility>

#include "sscor/numeric.hpp"
#include "sscor/pearson.hpp"
#include "sscor/rng.hpp"

namespace sscor {

namespace {

constexpr std::uint64_t kCoverageSalt = 0x636f766572u;  // experiment streams
constexpr std::uint64_t kAsympSalt = 0x6173796d70u;     // verification streams

std::uint64_t cell_stream(std::uint64_t salt, const DistFamily& dist, double rho,
                          std::size_t n, std::uint64_t rep) {
    std::uint64_t h = salt;
    h = rng::mix(h, static_cast<std::uint64_t>(dist.family));
    h = rng::mix(h, std::bit_cast<std::uint64_t>(dist.nu));
    h = rng::mix(h, std::bit_cast<std::uint64_t>(rho));
    h = rng::mix(h, static_cast<std::uint64_t>(n));
    h = rng::mix(h, rep);
    return h;
}

// Runs fn(r) for r in [0, count) on up to `threads` workers in contiguous
// blocks. Results must go into per-r slots; the partition cannot influence
// them. The first exception (if any) is rethrown after all workers join.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& fn) {
    unsigned hw = std::thread::hardware_concurrency();
    unsigned t = threads ? threads : (hw ? hw : 1);
    if (count < 2 * t) t = 1;
    if (t <= 1) {
        for (std::size_t r = 0; r < count; ++r) fn(r);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(t);
    const std::size_t chunk = (count + t - 1) / t;
    for (unsigned w = 0; w < t; ++w) {
        const std::size_t begin = std::min(count, w * chunk);
        const std::size_t end = std::min(count, begin + chunk);
        pool.emplace_back([&, w, begin, end] {
            try {
                for (std::size_t r = begin; r < end; ++r) fn(r);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

struct RepSlot {
    double len = 0.0;
    std::uint8_t ok = 0;
    std::uint8_t covered = 0;
};

struct CellStats {
    double cov_pct, cov_se, len_mean, len_se;
    std::size_t used, failures;
};

// Fixed-order aggregation of one estimator's replication slots; called on
// one thread so the output is independent of the worker partition.
CellStats aggregate(const std::vector<RepSlot>& slots, std::size_t reps,
                    std::size_t stride, std::size_t offset) {
    std::size_t used = 0, covered = 0;
    KahanSum len_sum;
    for (std::size_t r = 0; r < reps; ++r) {
        const RepSlot& s = slots[r * stride + offset];
        if (!s.ok) continue;
        ++used;
        covered += s.covered;
        len_sum.add(s.len);
    }
    CellStats out{};
    out.used = used;
    out.failures = reps - used;
    if (used == 0) {
        out.cov_pct = out.cov_se = out.len_mean = out.len_se =
            std::numeric_limits<double>::quiet_NaN();
        return out;
    }
    const double m = static_cast<double>(used);
    const double p = static_cast<double>(covered) / m;
    out.cov_pct = 100.0 * p;
    out.cov_se = 100.0 * std::sqrt(p * (1.0 - p) / m);
    out.len_mean = len_sum.value() / m;
    KahanSum sq;
    for (std::size_t r = 0; r < reps; ++r) {
        const RepSlot& s = slots[r * stride + offset];
        if (!s.ok) continue;
        const double d = s.len - out.len_mean;
        sq.add(d * d);
    }
    out.len_se = used > 1 ? std::sqrt(sq.value() / (m - 1.0) / m) : 0.0;
    return out;
}

void validate_config(const ExperimentConfig& cfg) {
    if (cfg.distributions.empty())
        throw InvalidInputError("experiment: no distributions given");
    if (cfg.rhos.empty()) throw InvalidInputError("experiment: no correlations given");
    if (cfg.ns.empty()) throw InvalidInputError("experiment: no sample sizes given");
    if (cfg.estimators.empty()) throw InvalidInputError("experiment: no estimators given");
    if (cfg.reps < 1) throw InvalidInputError("experiment: reps >= 1 required");
    if (!(cfg.level > 0.0 && cfg.level < 1.0))
        throw InvalidInputError("experiment: level must be in (0,1)");
    for (double r : cfg.rhos)
        if (!(std::fabs(r) < 1.0))
            throw InvalidInputError("experiment: |rho| < 1 required");
    for (std::size_t n : cfg.ns)
        if (n < 10)
            throw InvalidInputError("experiment: sample sizes below 10 are not supported");
}

std::vector<ExperimentRow> run_experiment(const ExperimentConfig& cfg, bool length_se) {
    validate_config(cfg);
    const std::size_t ne = cfg.estimators.size();
    const bool want_ss =
        std::count(cfg.estimators.begin(), cfg.estimators.end(), CiEstimator::sscor) ||
        std::count(cfg.estimators.begin(), cfg.estimators.end(), CiEstimator::sscor_h);
    const bool want_cor =
        std::count(cfg.estimators.begin(), cfg.estimators.end(), CiEstimator::cor) ||
        std::count(cfg.estimators.begin(), cfg.estimators.end(), CiEstimator::cor_z);

    std::vector<ExperimentRow> rows;
    std::vector<RepSlot> slots(cfg.reps * ne);

    for (const DistFamily& dist : cfg.distributions) {
        for (double rho : cfg.rhos) {
            EllipticalSpec spec;
            spec.family = dist.family;
            spec.nu = dist.nu;
            spec.rho = rho;
            for (std::size_t n : cfg.ns) {
                std::fill(slots.begin(), slots.end(), RepSlot{});
                const double sqn = std::sqrt(static_cast<double>(n));

                parallel_for(cfg.reps, cfg.threads, [&](std::size_t r) {
                    const SeedSpec seed{cfg.master_seed,
                                        cell_stream(kCoverageSalt, dist, rho, n, r)};
                    const SampleMatrix X = sample(spec, n, seed);
                    auto record = [&](std::size_t e, const ConfInterval& ci) {
                        RepSlot& s = slots[r * ne + e];
                        s.ok = 1;
                        s.covered = (ci.lo <= rho && rho <= ci.hi) ? 1 : 0;
                        s.len = (ci.hi - ci.lo) * sqn;
                    };
                    if (want_ss) {
                        try {
                            const CorrEstimate est =
                                sscor_two_stage(X, cfg.scale, cfg.location);
                            for (std::size_t e = 0; e < ne; ++e) {
                                if (cfg.estimators[e] == CiEstimator::sscor)
                                    record(e, confidence_interval(est, cfg.level,
                                                                  IntervalMethod::plain));
                                else if (cfg.estimators[e] == CiEstimator::sscor_h)
                                    record(e, confidence_interval(est, cfg.level,
                                                                  IntervalMethod::h_transform));
                            }
                        } catch (const Error&) {
                            // slots stay ok=0: counted as failures
                        }
                    }
                    if (want_cor) {
                        try {
                            const double rhat = pearson_corr(X);
                            const double kap = kurtosis_mv(X).kappa_hat;
                            for (std::size_t e = 0; e < ne; ++e) {
                                if (cfg.estimators[e] == CiEstimator::cor)
                                    record(e, ci_pearson(rhat, kap, n, cfg.level,
                                                         IntervalMethod::plain));
                                else if (cfg.estimators[e] == CiEstimator::cor_z)
                                    record(e, ci_pearson(rhat, kap, n, cfg.level,
                                                         IntervalMethod::z_transform));
                            }
                        } catch (const Error&) {
                        }
                    }
                });

                for (std::size_t e = 0; e < ne; ++e) {
                    const CellStats st = aggregate(slots, cfg.reps, ne, e);
                    rows.push_back(ExperimentRow{
                        dist.label, rho, n, estimator_name(cfg.estimators[e]),
                        st.cov_pct, length_se ? st.len_se : st.cov_se, st.len_mean,
                        st.used, st.failures});
                }
            }
        }
    }
    return rows;
}

std::string fmt6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// Sample variance plus the standard error of that variance estimate via the
// fourth central moment.
std::pair<double, double> variance_with_se(const std::vector<double>& x) {
    const std::size_t m = x.size();
    if (m < 2) return {0.0, 0.0};
    KahanSum s;
    for (double v : x) s.add(v);
    const double mean = s.value() / static_cast<double>(m);
    KahanSum s2, s4;
    for (double v : x) {
        const double d = v - mean;
        s2.add(d * d);
        s4.add(d * d * d * d);
    }
    const double mf = static_cast<double>(m);
    const double var = s2.value() / (mf - 1.0);
    const double m4 = s4.value() / mf;
    const double se2 = (m4 - var * var * (mf - 3.0) / (mf - 1.0)) / mf;
    return {var, se2 > 0.0 ? std::sqrt(se2) : 0.0};
}

std::pair<double, double> mean_with_se(const std::vector<double>& x) {
    const std::size_t m = x.size();
    KahanSum s;
    for (double v : x) s.add(v);
    const double mean = s.value() / static_cast<double>(m);
    if (m < 2) return {mean, 0.0};
    KahanSum sq;
    for (double v : x) {
        const double d = v - mean;
        sq.add(d * d);
    }
    const double mf = static_cast<double>(m);
    return {mean, std::sqrt(sq.value() / (mf - 1.0) / mf)};
}

double rel_err(double empirical, double expected) {
    if (expected == 0.0) return 0.0;
    return std::fabs(empirical / expected - 1.0);
}

}  // namespace

DistFamily dist_normal() { return DistFamily{Family::normal, 0.0, "normal"}; }

DistFamily dist_t(double nu) {
    if (!(nu > 0.0)) throw InvalidInputError("dist_t: degrees of freedom must be positive");
    char buf[32];
    if (nu == std::floor(nu) && nu < 1e6)
        std::snprintf(buf, sizeof(buf), "t%d", static_cast<int>(nu));
    else
        std::snprintf(buf, sizeof(buf), "t%g", nu);
    return DistFamily{Family::student, nu, buf};
}

DistFamily parse_dist(const std::string& name) {
    if (name == "normal" || name == "gauss" || name == "gaussian") return dist_normal();
    if (name.size() > 1 && name[0] == 't') {
        try {
            const double nu = std::stod(name.substr(1));
            return dist_t(nu);
        } catch (const std::exception&) {
        }
    }
    throw InvalidInputError("unknown distribution '" + name + "' (use normal, t3, t5, ...)");
}

const char* estimator_name(CiEstimator e) {
    switch (e) {
        case CiEstimator::sscor: return "sscor";
        case CiEstimator::sscor_h: return "sscor-h";
        case CiEstimator::cor: return "cor";
        case CiEstimator::cor_z: return "cor-z";
    }
    return "?";
}

CiEstimator parse_estimator(const std::string& name) {
    if (name == "sscor") return CiEstimator::sscor;
    if (name == "sscor-h" || name == "sscor_h") return CiEstimator::sscor_h;
    if (name == "cor") return CiEstimator::cor;
    if (name == "cor-z" || name == "cor_z") return CiEstimator::cor_z;
    throw InvalidInputError("unknown estimator '" + name +
                            "' (use sscor, sscor-h, cor, cor-z)");
}

std::vector<ExperimentRow> run_coverage(const ExperimentConfig& config) {
    return run_experiment(config, false);
}

std::vector<ExperimentRow> run_length(const ExperimentConfig& config) {
    return run_experiment(config, true);
}

std::string to_csv(const std::vector<ExperimentRow>& rows) {
    std::string out = "dist,rho,n,estimator,coverage_pct,mc_se,avg_len_sqrt_n,reps,failures\n";
    for (const ExperimentRow& r : rows) {
        out += r.dist;
        out += ',';
        out += fmt6(r.rho);
        out += ',';
        out += std::to_string(r.n);
        out += ',';
        out += r.estimator;
        out += ',';
        out += fmt6(r.coverage_pct);
        out += ',';
        out += fmt6(r.mc_se);
        out += ',';
        out += fmt6(r.avg_len_sqrt_n);
        out += ',';
        out += std::to_string(r.reps_used);
        out += ',';
        out += std::to_string(r.failures);
        out += '\n';
    }
    return out;
}

std::string to_table(const std::vector<ExperimentRow>& rows, bool lengths) {
    // Axes in order of first appearance (rows arrive dist -> rho -> n -> est).
    std::vector<std::string> dists, ests;
    std::vector<double> rhos;
    std::vector<std::size_t> ns;
    for (const ExperimentRow& r : rows) {
        if (std::find(dists.begin(), dists.end(), r.dist) == dists.end())
            dists.push_back(r.dist);
        if (std::find(rhos.begin(), rhos.end(), r.rho) == rhos.end()) rhos.push_back(r.rho);
        if (std::find(ns.begin(), ns.end(), r.n) == ns.end()) ns.push_back(r.n);
        if (std::find(ests.begin(), ests.end(), r.estimator) == ests.end())
            ests.push_back(r.estimator);
    }
    char buf[64];
    std::string out = lengths ? "average CI length * sqrt(n)\n" : "coverage (%)\n";
    std::snprintf(buf, sizeof(buf), "%-8s %-5s %-9s", "dist", "rho", "estimator");
    out += buf;
    for (std::size_t n : ns) {
        std::snprintf(buf, sizeof(buf), " %8s", ("n=" + std::to_string(n)).c_str());
        out += buf;
    }
    out += '\n';
    for (const std::string& d : dists)
        for (double rho : rhos)
            for (const std::string& e : ests) {
                std::snprintf(buf, sizeof(buf), "%-8s %-5g %-9s", d.c_str(), rho, e.c_str());
                out += buf;
                for (std::size_t n : ns) {
                    const ExperimentRow* hit = nullptr;
                    for (const ExperimentRow& r : rows)
                        if (r.dist == d && r.rho == rho && r.n == n && r.estimator == e) {
                            hit = &r;
                            break;
                        }
                    if (!hit) {
                        std::snprintf(buf, sizeof(buf), " %8s", "-");
                    } else {
                        std::snprintf(buf, sizeof(buf), " %8.2f",
                                      lengths ? hit->avg_len_sqrt_n : hit->coverage_pct);
                    }
                    out += buf;
                }
                out += '\n';
            }
    return out;
}

AsymptoticsReport verify_asymptotics(double rho, std::size_t n, std::size_t reps,
                                     std::uint64_t master_seed, const DistFamily& dist,
                                     unsigned threads) {
    if (!(std::fabs(rho) < 1.0))
        throw InvalidInputError("verify_asymptotics: |rho| < 1 required");
    if (n < 10) throw InvalidInputError("verify_asymptotics: n >= 10 required");
    if (reps < 2) throw InvalidInputError("verify_asymptotics: reps >= 2 required");

    EllipticalSpec spec;
    spec.family = dist.family;
    spec.nu = dist.nu;
    spec.rho = rho;  // equal scales, centered: the standardized population

    struct Slot {
        double rho_hat = 0.0;
        double m4 = 0.0, m31 = 0.0, m22 = 0.0, m2 = 0.0, m11 = 0.0;
        std::uint8_t ok = 0;
    };
    std::vector<Slot> slots(reps);

    parallel_for(reps, threads, [&](std::size_t r) {
        const SeedSpec seed{master_seed, cell_stream(kAsympSalt, dist, rho, n, r)};
        const SampleMatrix X = sample(spec, n, seed);
        Slot& s = slots[r];

        // Sign moments around the true center (the population the constants
        // describe); the estimator below re-centers on its own.
        KahanSum k4, k31, k22, k2, k11;
        for (std::size_t i = 0; i < n; ++i) {
            const double h = std::hypot(X(i, 0), X(i, 1));
            if (h == 0.0) continue;  // s(0) = 0 contributes nothing
            const double s1 = X(i, 0) / h;
            const double s2 = X(i, 1) / h;
            const double t = s1 * s1;
            const double u = s2 * s2;
            const double pr = s1 * s2;
            k4.add(t * t);
            k31.add(t * pr);
            k22.add(t * u);
            k2.add(t);
            k11.add(pr);
        }
        const double nf = static_cast<double>(n);
        s.m4 = k4.value() / nf;
        s.m31 = k31.value() / nf;
        s.m22 = k22.value() / nf;
        s.m2 = k2.value() / nf;
        s.m11 = k11.value() / nf;

        try {
            s.rho_hat = sscor_two_stage(X).rho_hat;
            s.ok = 1;
        } catch (const Error&) {
        }
    });

    const AsymConstants c = asym_constants(rho);
    const double sqn = std::sqrt(static_cast<double>(n));

    std::vector<double> v_rho;
    v_rho.reserve(reps);
    std::vector<double> v_s12(reps), v4(reps), v31(reps), v22(reps), v2(reps);
    std::size_t failures = 0;
    for (std::size_t r = 0; r < reps; ++r) {
        const Slot& s = slots[r];
        if (s.ok)
            v_rho.push_back(sqn * (s.rho_hat - rho));
        else
            ++failures;
        v_s12[r] = sqn * (s.m11 - c.delta);
        v4[r] = s.m4;
        v31[r] = s.m31;
        v22[r] = s.m22;
        v2[r] = s.m2;
    }

    AsymptoticsReport rep;
    rep.dist = dist.label;
    rep.rho = rho;
    rep.n = n;
    rep.reps = reps;
    rep.master_seed = master_seed;
    rep.failures = failures;

    const auto [var_rho, se_vr] = variance_with_se(v_rho);
    rep.entries.push_back({"var sqrt(n)(rho_hat - rho)", var_rho, asv_two_stage(rho),
                           se_vr, rel_err(var_rho, asv_two_stage(rho))});
    const auto [var_s12, se_vs] = variance_with_se(v_s12);
    rep.entries.push_back(
        {"var sqrt(n)(s12_hat - delta)", var_s12, c.w, se_vs, rel_err(var_s12, c.w)});
    const auto [a_hat, se_a] = mean_with_se(v4);
    rep.entries.push_back({"alpha  E[(s1)^4]", a_hat, c.alpha, se_a, rel_err(a_hat, c.alpha)});
    const auto [b_hat, se_b] = mean_with_se(v31);
    rep.entries.push_back({"beta   E[(s1)^3 s2]", b_hat, c.beta, se_b, rel_err(b_hat, c.beta)});
    const auto [g_hat, se_g] = mean_with_se(v22);
    rep.entries.push_back(
        {"gamma  E[(s1 s2)^2]", g_hat, c.gamma, se_g, rel_err(g_hat, c.gamma)});
    std::vector<double> v11(reps);
    for (std::size_t r = 0; r < reps; ++r) v11[r] = slots[r].m11;
    const auto [d_hat, se_d] = mean_with_se(v11);
    rep.entries.push_back({"delta  E[s1 s2]", d_hat, c.delta, se_d, rel_err(d_hat, c.delta)});

    const auto [s2_hat, se_s2] = mean_with_se(v2);
    (void)se_s2;
    rep.identity_gap = a_hat + g_hat - s2_hat;
    return rep;
}

std::string format_report(const AsymptoticsReport& report) {
    char buf[160];
    std::string out;
    std::snprintf(buf, sizeof(buf),
                  "asymptotic verification: dist=%s rho=%g n=%zu reps=%zu seed=%llu\n",
                  report.dist.c_str(), report.rho, report.n, report.reps,
                  static_cast<unsigned long long>(report.master_seed));
    out += buf;
    std::snprintf(buf, sizeof(buf), "  %-30s %12s %12s %10s %10s\n", "quantity", "empirical",
                  "expected", "rel.err", "mc.se");
    out += buf;
    for (const AsymEntry& e : report.entries) {
        std::snprintf(buf, sizeof(buf), "  %-30s %12.6f %12.6f %10.4f %10.5f\n",
                      e.name.c_str(), e.empirical, e.expected, e.rel_err, e.mc_se);
        out += buf;
    }
    std::snprintf(buf, sizeof(buf), "  shared-term identity alpha+gamma-E[(s1)^2] = %.3e\n",
                  report.identity_gap);
    out += buf;
    std::snprintf(buf, sizeof(buf), "  estimator failures: %zu of %zu\n", report.failures,
                  report.reps);
    out += buf;
    return out;
}

}  // namespace sscor
