#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "sscor/simharness.hpp"

using namespace sscor;

namespace {

ExperimentConfig tiny_config() {
    ExperimentConfig cfg;
    cfg.distributions = {dist_normal(), dist_t(5)};
    cfg.rhos = {0.0, 0.5};
    cfg.ns = {10, 25};
    cfg.reps = 200;
    cfg.estimators = {CiEstimator::sscor, CiEstimator::sscor_h, CiEstimator::cor,
                      CiEstimator::cor_z};
    cfg.master_seed = 5;
    cfg.threads = 2;
    return cfg;
}

}  // namespace

TEST_CASE("distribution and estimator names round-trip") {
    CHECK(dist_normal().label == "normal");
    CHECK(dist_t(5).label == "t5");
    CHECK(dist_t(3).nu == 3.0);
    CHECK(parse_dist("normal").family == Family::normal);
    CHECK(parse_dist("gauss").family == Family::normal);
    CHECK(parse_dist("t3").nu == 3.0);
    CHECK(parse_dist("t5").label == "t5");
    CHECK_THROWS_AS(parse_dist("uniform"), InvalidInputError);
    CHECK_THROWS_AS(dist_t(0.0), InvalidInputError);

    for (auto e : {CiEstimator::sscor, CiEstimator::sscor_h, CiEstimator::cor,
                   CiEstimator::cor_z}) {
        CHECK(parse_estimator(estimator_name(e)) == e);
    }
    CHECK(parse_estimator("sscor_h") == CiEstimator::sscor_h);
    CHECK_THROWS_AS(parse_estimator("kendall"), InvalidInputError);
}

TEST_CASE("a single replication gives degenerate coverage") {
    ExperimentConfig cfg = tiny_config();
    cfg.reps = 1;
    cfg.distributions = {dist_normal()};
    cfg.rhos = {0.0};
    cfg.ns = {25};
    auto rows = run_coverage(cfg);
    REQUIRE(rows.size() == 4);
    for (const auto& r : rows) {
        if (r.reps_used == 0) continue;  // the lone replication failed
        CHECK((r.coverage_pct == 0.0 || r.coverage_pct == 100.0));
    }
}

TEST_CASE("coverage study bookkeeping") {
    ExperimentConfig cfg = tiny_config();
    auto rows = run_coverage(cfg);
    // one row per (dist, rho, n, estimator)
    REQUIRE(rows.size() == 2 * 2 * 2 * 4);
    for (const auto& r : rows) {
        CHECK(r.reps_used + r.failures == cfg.reps);
        CHECK(r.coverage_pct >= 0.0);
        CHECK(r.coverage_pct <= 100.0);
        CHECK(r.avg_len_sqrt_n >= 0.0);
        CHECK(r.mc_se >= 0.0);
    }
    // rows follow the configured grid order
    CHECK(rows[0].dist == "normal");
    CHECK(rows[0].estimator == std::string(estimator_name(CiEstimator::sscor)));
}

TEST_CASE("thread count does not change the results") {
    ExperimentConfig cfg = tiny_config();
    cfg.threads = 1;
    auto one = run_coverage(cfg);
    cfg.threads = 4;
    auto four = run_coverage(cfg);
    REQUIRE(one.size() == four.size());
    for (std::size_t i = 0; i < one.size(); ++i) {
        CHECK(one[i].coverage_pct == four[i].coverage_pct);
        CHECK(one[i].avg_len_sqrt_n == four[i].avg_len_sqrt_n);
        CHECK(one[i].mc_se == four[i].mc_se);
        CHECK(one[i].failures == four[i].failures);
    }
    CHECK(to_csv(one) == to_csv(four));  // byte-identical serialization
}

TEST_CASE("csv serialization") {
    ExperimentConfig cfg = tiny_config();
    cfg.distributions = {dist_normal()};
    cfg.rhos = {0.5};
    cfg.ns = {10};
    cfg.estimators = {CiEstimator::sscor_h};
    cfg.reps = 50;
    auto rows = run_coverage(cfg);
    auto csv = to_csv(rows);
    CHECK(csv.rfind("dist,rho,n,estimator,coverage_pct,mc_se,avg_len_sqrt_n,reps,failures\n",
                    0) == 0);
    CHECK(csv.find("\nnormal,0.5,10,sscor-h,") != std::string::npos);

    auto table = to_table(rows, false);
    CHECK(table.find("sscor-h") != std::string::npos);
    CHECK(table.find("10") != std::string::npos);
}

TEST_CASE("length study reports positive uncertainty") {
    ExperimentConfig cfg = tiny_config();
    cfg.distributions = {dist_normal()};
    cfg.rhos = {0.0};
    cfg.ns = {25};
    cfg.estimators = {CiEstimator::sscor};
    auto rows = run_length(cfg);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].avg_len_sqrt_n > 0.0);
    CHECK(rows[0].mc_se > 0.0);
    CHECK(rows[0].mc_se < rows[0].avg_len_sqrt_n);
}

TEST_CASE("experiment configuration is validated") {
    auto base = tiny_config();

    auto cfg = base;
    cfg.distributions.clear();
    CHECK_THROWS_AS(run_coverage(cfg), InvalidInputError);

    cfg = base;
    cfg.rhos.clear();
    CHECK_THROWS_AS(run_coverage(cfg), InvalidInputError);

    cfg = base;
    cfg.rhos = {1.0};
    CHECK_THROWS_AS(run_coverage(cfg), InvalidInputError);

    cfg = base;
    cfg.ns = {5};
    CHECK_THROWS_AS(run_coverage(cfg), InvalidInputError);

    cfg = base;
    cfg.level = 1.0;
    CHECK_THROWS_AS(run_length(cfg), InvalidInputError);

    cfg = base;
    cfg.reps = 0;
    CHECK_THROWS_AS(run_coverage(cfg), InvalidInputError);

    cfg = base;
    cfg.estimators.clear();
    CHECK_THROWS_AS(run_coverage(cfg), InvalidInputError);
}

TEST_CASE("asymptotics verification on a small run") {
    auto report = verify_asymptotics(0.5, 100, 300, 11);
    CHECK(report.rho == 0.5);
    CHECK(report.n == 100);
    CHECK(report.reps == 300);
    REQUIRE(report.entries.size() == 6);
    for (const auto& e : report.entries) {
        CHECK(std::isfinite(e.empirical));
        CHECK(e.mc_se > 0.0);
        // a short run still lands in the right neighborhood
        CHECK(e.rel_err < 0.5);
    }
    // alpha + gamma and the second sign moment share their terms exactly
    CHECK(std::fabs(report.identity_gap) < 1e-12);

    auto text = format_report(report);
    CHECK(text.find("asymptotic verification") != std::string::npos);
    CHECK(text.find("rho_hat") != std::string::npos);

    CHECK_THROWS_AS(verify_asymptotics(1.0, 100, 300, 11), InvalidInputError);
    CHECK_THROWS_AS(verify_asymptotics(0.0, 5, 300, 11), InvalidInputError);
    CHECK_THROWS_AS(verify_asymptotics(0.0, 100, 1, 11), InvalidInputError);
}

TEST_CASE("asymptotics verification is thread-deterministic") {
    auto a = verify_asymptotics(0.0, 50, 400, 3, dist_normal(), 1);
    auto b = verify_asymptotics(0.0, 50, 400, 3, dist_normal(), 4);
    REQUIRE(a.entries.size() == b.entries.size());
    for (std::size_t i = 0; i < a.entries.size(); ++i) {
        CHECK(a.entries[i].empirical == b.entries[i].empirical);
        CHECK(a.entries[i].mc_se == b.entries[i].mc_se);
    }
}
