#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sscor/correlation.hpp"
#include "sscor/io.hpp"
#include "sscor/pearson.hpp"
#include "sscor/simharness.hpp"

namespace {

struct SimFlags {
    std::vector<std::string> dists;
    std::vector<double> rhos;
    std::vector<std::size_t> ns;
    std::size_t reps = 10000;
    double level = 0.95;
    std::vector<std::string> estimators;
    std::uint64_t seed = 1;
    unsigned threads = 0;
    std::string out;
    bool table = false;
    std::string scale = "qn";
    std::string location = "spatial";
};

struct VerifyFlags {
    std::vector<double> rhos;
    std::size_t n = 500;
    std::size_t reps = 10000;
    std::uint64_t seed = 1;
    std::string dist = "normal";
    unsigned threads = 0;
    std::string out;
};

struct EstimateFlags {
    std::string input;
    double level = 0.95;
    double rho0 = 0.0;
    bool have_rho0 = false;
    std::string scale = "qn";
    std::string location = "spatial";
    std::string out;
};

struct DumpFlags {
    double from = -1.0;
    double to = 1.0;
    std::size_t points = 201;
    std::string out;
};

sscor::ScaleMethod parse_scale(const std::string& s) {
    if (s == "qn") return {sscor::ScaleKind::qn, false};
    if (s == "mad") return {sscor::ScaleKind::mad, false};
    if (s == "sd") return {sscor::ScaleKind::sd, false};
    throw sscor::InvalidInputError("unknown scale '" + s + "' (use qn, mad, sd)");
}

sscor::LocationMethod parse_location(const std::string& s) {
    if (s == "spatial") return {sscor::LocationKind::spatial_median, {}};
    if (s == "coordwise") return {sscor::LocationKind::coordinatewise_median, {}};
    throw sscor::InvalidInputError("unknown location '" + s + "' (use spatial, coordwise)");
}

const CLI::Validator kDistCheck(
    [](std::string& s) -> std::string {
        try {
            sscor::parse_dist(s);
            return {};
        } catch (const std::exception& e) {
            return std::string(e.what());
        }
    },
    "DIST");

const CLI::Validator kEstimatorCheck(
    [](std::string& s) -> std::string {
        try {
            sscor::parse_estimator(s);
            return {};
        } catch (const std::exception& e) {
            return std::string(e.what());
        }
    },
    "ESTIMATOR");

const CLI::Validator kOpenRho(
    [](std::string& s) -> std::string {
        try {
            if (std::fabs(std::stod(s)) < 1.0) return {};
        } catch (const std::exception&) {
        }
        return std::string("requires |rho| < 1");
    },
    "RHO");

const CLI::Validator kOpenLevel(
    [](std::string& s) -> std::string {
        try {
            double v = std::stod(s);
            if (v > 0.0 && v < 1.0) return {};
        } catch (const std::exception&) {
        }
        return std::string("requires 0 < level < 1");
    },
    "LEVEL");

void add_sim_flags(CLI::App* cmd, SimFlags& f) {
    cmd->add_option("--dist", f.dists,
                    "distribution (repeatable): normal, t3, t5, or t<nu>; "
                    "default: normal t5 t3")
        ->check(kDistCheck);
    cmd->add_option("--rho", f.rhos, "true correlation (repeatable); default: 0 0.5")
        ->check(kOpenRho);
    cmd->add_option("--n", f.ns,
                    "sample size >= 10 (repeatable); default: 10 20 50 100 500 10000")
        ->check(CLI::Range(static_cast<std::size_t>(10), static_cast<std::size_t>(1) << 31));
    cmd->add_option("--reps", f.reps, "replications per cell (default 10000)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--level", f.level, "confidence level (default 0.95)")->check(kOpenLevel);
    cmd->add_option("--estimator", f.estimators,
                    "estimator (repeatable): sscor, sscor-h, cor, cor-z; default: all four")
        ->check(kEstimatorCheck);
    cmd->add_option("--seed", f.seed, "master seed (default 1)");
    cmd->add_option("--threads", f.threads, "worker threads; 0 = hardware (default)");
    cmd->add_option("--out", f.out, "write output to this file instead of stdout");
    cmd->add_flag("--table", f.table, "wide table layout instead of CSV");
    cmd->add_option("--scale", f.scale, "marginal scale estimator (default qn)")
        ->check(CLI::IsMember({"qn", "mad", "sd"}));
    cmd->add_option("--location", f.location, "location estimator (default spatial)")
        ->check(CLI::IsMember({"spatial", "coordwise"}));
    cmd->set_config("--config", "", "flat key=value file mirroring the flags; flags override");
}

sscor::ExperimentConfig make_config(const SimFlags& f) {
    sscor::ExperimentConfig cfg;
    for (const auto& d : f.dists) cfg.distributions.push_back(sscor::parse_dist(d));
    if (cfg.distributions.empty())
        cfg.distributions = {sscor::dist_normal(), sscor::dist_t(5), sscor::dist_t(3)};
    cfg.rhos = f.rhos.empty() ? std::vector<double>{0.0, 0.5} : f.rhos;
    cfg.ns = f.ns.empty() ? std::vector<std::size_t>{10, 20, 50, 100, 500, 10000} : f.ns;
    cfg.reps = f.reps;
    cfg.level = f.level;
    for (const auto& e : f.estimators) cfg.estimators.push_back(sscor::parse_estimator(e));
    if (cfg.estimators.empty())
        cfg.estimators = {sscor::CiEstimator::sscor, sscor::CiEstimator::sscor_h,
                          sscor::CiEstimator::cor, sscor::CiEstimator::cor_z};
    cfg.master_seed = f.seed;
    cfg.threads = f.threads;
    cfg.scale = parse_scale(f.scale);
    cfg.location = parse_location(f.location);
    return cfg;
}

void write_output(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::fputs(text.c_str(), stdout);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw sscor::InvalidInputError("cannot open output file: " + path);
    out << text;
}

void run_sim(const SimFlags& f, bool lengths) {
    const sscor::ExperimentConfig cfg = make_config(f);
    const std::vector<sscor::ExperimentRow> rows =
        lengths ? sscor::run_length(cfg) : sscor::run_coverage(cfg);
    write_output(f.table ? sscor::to_table(rows, lengths) : sscor::to_csv(rows), f.out);
}

void run_verify(const VerifyFlags& f) {
    const sscor::DistFamily dist = sscor::parse_dist(f.dist);
    const std::vector<double> rhos =
        f.rhos.empty() ? std::vector<double>{0.0, 0.5} : f.rhos;
    std::string out;
    for (double rho : rhos) {
        const sscor::AsymptoticsReport report =
            sscor::verify_asymptotics(rho, f.n, f.reps, f.seed, dist, f.threads);
        out += sscor::format_report(report);
    }
    write_output(out, f.out);
}

void run_estimate(const EstimateFlags& f) {
    const sscor::SampleMatrix X = sscor::read_matrix_csv(f.input);
    const sscor::ScaleMethod sm = parse_scale(f.scale);
    const sscor::LocationMethod lm = parse_location(f.location);
    const sscor::CorrEstimate est = sscor_two_stage(X, sm, lm);
    const sscor::ConfInterval ci_h =
        confidence_interval(est, f.level, sscor::IntervalMethod::h_transform);
    const sscor::ConfInterval ci_plain =
        confidence_interval(est, f.level, sscor::IntervalMethod::plain);

    char buf[256];
    std::string out;
    std::snprintf(buf, sizeof(buf), "input: %s (n = %zu)\n", f.input.c_str(), est.n);
    out += buf;
    std::snprintf(buf, sizeof(buf),
                  "two-stage spatial sign correlation (scale=%s, location=%s)\n",
                  f.scale.c_str(), f.location.c_str());
    out += buf;
    std::snprintf(buf, sizeof(buf), "  rho_hat              = % .6f\n", est.rho_hat);
    out += buf;
    std::snprintf(buf, sizeof(buf), "  %g%% CI (h-transform) = [% .6f, % .6f]%s\n",
                  100.0 * f.level, ci_h.lo, ci_h.hi, ci_h.clamped ? "  (clamped)" : "");
    out += buf;
    std::snprintf(buf, sizeof(buf), "  %g%% CI (plain)       = [% .6f, % .6f]%s\n",
                  100.0 * f.level, ci_plain.lo, ci_plain.hi,
                  ci_plain.clamped ? "  (clamped)" : "");
    out += buf;
    std::snprintf(buf, sizeof(buf), "  marginal scales      = (%.6g, %.6g)\n", est.scales[0],
                  est.scales[1]);
    out += buf;
    std::snprintf(buf, sizeof(buf), "  location             = (%.6g, %.6g)\n",
                  est.location[0], est.location[1]);
    out += buf;

    if (f.have_rho0) {
        const double alpha = 1.0 - f.level;
        const sscor::TestResult t = test_one_sample(est, f.rho0, alpha);
        std::snprintf(buf, sizeof(buf),
                      "test of rho = %g: T = %.6g, p = %.4g -> %s at alpha = %g\n", f.rho0,
                      t.statistic, t.p_value, t.reject ? "reject" : "do not reject", alpha);
        out += buf;
    }

    const double r = pearson_corr(X);
    out += "pearson benchmark\n";
    std::snprintf(buf, sizeof(buf), "  r                    = % .6f\n", r);
    out += buf;
    try {
        const double kappa = kurtosis_mv(X).kappa_hat;
        const sscor::ConfInterval pc =
            ci_pearson(r, kappa, est.n, f.level, sscor::IntervalMethod::plain);
        const sscor::ConfInterval pz =
            ci_pearson(r, kappa, est.n, f.level, sscor::IntervalMethod::z_transform);
        std::snprintf(buf, sizeof(buf), "  kappa_hat            = % .6f%s\n", kappa,
                      pc.var_floored ? "  (variance factor floored)" : "");
        out += buf;
        std::snprintf(buf, sizeof(buf), "  %g%% CI (cor)         = [% .6f, % .6f]%s\n",
                      100.0 * f.level, pc.lo, pc.hi, pc.clamped ? "  (clamped)" : "");
        out += buf;
        std::snprintf(buf, sizeof(buf), "  %g%% CI (cor-z)       = [% .6f, % .6f]\n",
                      100.0 * f.level, pz.lo, pz.hi);
        out += buf;
    } catch (const sscor::InvalidInputError&) {
        out += "  kurtosis unavailable (singular sample covariance); no Pearson CI\n";
    }
    write_output(out, f.out);
}

void run_dump(const DumpFlags& f) {
    if (!(f.from < f.to) || f.points < 2 || std::fabs(f.from) > 1.0 || std::fabs(f.to) > 1.0)
        throw sscor::InvalidInputError("dump-transform: need -1 <= from < to <= 1, points >= 2");
    std::string out = "x,h,z\n";
    char buf[128];
    for (std::size_t i = 0; i < f.points; ++i) {
        const double x =
            f.from + (f.to - f.from) * static_cast<double>(i) /
                         static_cast<double>(f.points - 1);
        const double h = sscor::vst(x);
        const double z = std::atanh(x);  // +-inf at the boundary, printed as is
        std::snprintf(buf, sizeof(buf), "%.10g,%.10g,%.10g\n", x, h, z);
        out += buf;
    }
    write_output(out, f.out);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"robust correlation toolkit: two-stage spatial sign correlation, "
                 "variance-stabilized inference, and a Monte Carlo study harness"};
    app.require_subcommand(1);

    SimFlags cov_flags, len_flags;
    CLI::App* sim_cov = app.add_subcommand(
        "sim-coverage", "empirical confidence-interval coverage over a simulation grid");
    add_sim_flags(sim_cov, cov_flags);
    CLI::App* sim_len = app.add_subcommand(
        "sim-length", "average confidence-interval length (times sqrt(n)) over a grid");
    add_sim_flags(sim_len, len_flags);

    VerifyFlags ver_flags;
    CLI::App* verify = app.add_subcommand(
        "verify-asymptotics", "Monte Carlo check of the asymptotic variance and constants");
    verify->add_option("--rho", ver_flags.rhos, "true correlation (repeatable); default: 0 0.5")
        ->check(kOpenRho);
    verify->add_option("--n", ver_flags.n, "sample size (default 500)")
        ->check(CLI::Range(static_cast<std::size_t>(10), static_cast<std::size_t>(1) << 31));
    verify->add_option("--reps", ver_flags.reps, "replications (default 10000)")
        ->check(CLI::PositiveNumber);
    verify->add_option("--seed", ver_flags.seed, "master seed (default 1)");
    verify->add_option("--dist", ver_flags.dist, "distribution (default normal)")
        ->check(kDistCheck);
    verify->add_option("--threads", ver_flags.threads, "worker threads; 0 = hardware");
    verify->add_option("--out", ver_flags.out, "write the report to this file");
    verify->set_config("--config", "", "flat key=value file mirroring the flags");

    EstimateFlags est_flags;
    CLI::App* estimate = app.add_subcommand(
        "estimate", "estimate the correlation of a two-column CSV/whitespace file");
    estimate->add_option("input", est_flags.input, "input file")->required();
    estimate->add_option("--level", est_flags.level, "confidence level (default 0.95)")
        ->check(kOpenLevel);
    CLI::Option* rho0_opt =
        estimate->add_option("--rho0", est_flags.rho0, "run the one-sample test of rho = rho0")
            ->check(CLI::Range(-1.0, 1.0));
    estimate->add_option("--scale", est_flags.scale, "marginal scale estimator (default qn)")
        ->check(CLI::IsMember({"qn", "mad", "sd"}));
    estimate
        ->add_option("--location", est_flags.location, "location estimator (default spatial)")
        ->check(CLI::IsMember({"spatial", "coordwise"}));
    estimate->add_option("--out", est_flags.out, "write the report to this file");
    estimate->set_config("--config", "", "flat key=value file mirroring the flags");

    DumpFlags dump_flags;
    CLI::App* dump = app.add_subcommand(
        "dump-transform", "dump a grid of (x, h(x), fisher_z(x)) for external plotting");
    dump->add_option("--from", dump_flags.from, "grid start (default -1)");
    dump->add_option("--to", dump_flags.to, "grid end (default 1)");
    dump->add_option("--points", dump_flags.points, "grid size (default 201)");
    dump->add_option("--out", dump_flags.out, "write the grid to this file");

    try {
        app.parse(argc, argv);
        est_flags.have_rho0 = rho0_opt->count() > 0;
        if (app.got_subcommand(sim_cov)) run_sim(cov_flags, false);
        if (app.got_subcommand(sim_len)) run_sim(len_flags, true);
        if (app.got_subcommand(verify)) run_verify(ver_flags);
        if (app.got_subcommand(estimate)) run_estimate(est_flags);
        if (app.got_subcommand(dump)) run_dump(dump_flags);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const sscor::ConvergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const sscor::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
