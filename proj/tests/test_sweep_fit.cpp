#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "cosmowave/roots.hpp"
#include "cosmowave/serialize.hpp"
#include "cosmowave/sweep_fit.hpp"

using namespace cosmowave;

namespace {

std::vector<double> dyadic_grid(int k0, int k1) {
    std::vector<double> eps;
    for (int k = k0; k <= k1; ++k) eps.push_back(std::ldexp(1.0, -k));
    return eps;
}

std::vector<SweepRecord> synthetic(const std::vector<double>& eps,
                                   double amplitude, double exponent) {
    std::vector<SweepRecord> recs;
    for (double e : eps) {
        SweepRecord r;
        r.epsilon = e;
        r.lifespan = amplitude * std::pow(e, exponent);
        recs.push_back(r);
    }
    return recs;
}

}  // namespace

TEST_CASE("fit is exact on synthetic power laws") {
    const auto eps = dyadic_grid(2, 10);
    const auto recs1 = synthetic(eps, 1.0, -0.5);
    const auto f1 = fit_powerlaw(recs1, 2.0);
    CHECK(std::abs(f1.slope + 0.5) <= 1e-12);
    CHECK(f1.r_squared >= 1.0 - 1e-12);
    CHECK(f1.relative_deviation <= 1e-12);
    CHECK(f1.pass);
    CHECK(f1.points_used == static_cast<int>(eps.size()));

    const auto recs2 = synthetic(eps, 3.0, -1.2);
    const auto f2 = fit_powerlaw(recs2, 2.0);
    CHECK(std::abs(f2.slope + 1.2) <= 1e-12);
    CHECK(std::abs(f2.intercept - std::log(3.0)) <= 1e-12);
    CHECK_FALSE(f2.pass);  // deviates from the -0.5 theory slope
}

TEST_CASE("log-corrected fit on exact transformed records") {
    // T solves T^2 (ln T)^{-n(p-1)} = eps^{-(p-1)}, n = 2, p = 2
    const int n = 2;
    const double p = 2.0;
    const auto eps = dyadic_grid(6, 16);
    std::vector<SweepRecord> recs;
    for (double e : eps) {
        SweepRecord r;
        r.epsilon = e;
        const auto T = solve_power_log(2.0, n * (p - 1.0), std::pow(e, -(p - 1.0)));
        REQUIRE(T.has_value());
        r.lifespan = *T;
        recs.push_back(r);
    }
    const auto fc = fit_log_corrected(recs, n, p);
    CHECK(std::abs(fc.slope + 1.0) <= 1e-9);
    CHECK(fc.r_squared >= 1.0 - 1e-12);
    CHECK(fc.pass);
    CHECK(fc.excluded_epsilons.empty());

    // the plain log-log fit on the same records shows the logarithmic bias
    const auto fp = fit_powerlaw(recs, p);
    CHECK(std::abs(fp.slope + (p - 1.0) / 2.0) > 0.01);
    CHECK(fc.r_squared > fp.r_squared);
}

TEST_CASE("log-corrected fit excludes records at or below T = e") {
    const auto eps = dyadic_grid(2, 8);
    auto recs = synthetic(eps, 10.0, -0.5);
    recs[0].lifespan = 2.0;  // below e, must be excluded with a warning entry
    const auto fc = fit_log_corrected(recs, 2, 2.0);
    REQUIRE(fc.excluded_epsilons.size() == 1);
    CHECK(fc.excluded_epsilons[0] == doctest::Approx(recs[0].epsilon));
    CHECK(fc.points_used == static_cast<int>(eps.size()) - 1);

    // fewer than 4 usable records is an error
    std::vector<SweepRecord> tiny = synthetic(dyadic_grid(2, 6), 1.0, -0.5);
    for (auto& r : tiny) r.lifespan = 2.0;
    CHECK_THROWS_AS(fit_log_corrected(tiny, 2, 2.0), std::invalid_argument);
}

TEST_CASE("fit requires at least 4 finite records") {
    auto recs = synthetic(dyadic_grid(2, 8), 1.0, -0.5);
    for (size_t i = 3; i < recs.size(); ++i) recs[i].lifespan.reset();
    CHECK_THROWS_AS(fit_powerlaw(recs, 2.0), std::invalid_argument);
}

TEST_CASE("trim flag drops the smallest-epsilon record") {
    const auto eps = dyadic_grid(2, 8);
    auto recs = synthetic(eps, 1.0, -0.5);
    recs.back().lifespan = 1e6;  // censored-looking outlier at the smallest eps
    FitOptions opt;
    opt.trim_smallest = true;
    const auto f = fit_powerlaw(recs, 2.0, opt);
    CHECK(f.points_used == static_cast<int>(eps.size()) - 1);
    CHECK(std::abs(f.slope + 0.5) <= 1e-12);
}

TEST_CASE("ode sweep: records in input order, monotone lifespans") {
    OdeSweepConfig cfg;
    cfg.mu = 3.0;
    cfg.p = 2.0;
    cfg.K.kind = CoefficientDescriptor::Kind::constant;
    cfg.K.A1 = 1.0;
    const auto eps = dyadic_grid(6, 16);
    const auto recs = sweep(cfg, eps);
    REQUIRE(recs.size() == eps.size());
    for (size_t i = 0; i < recs.size(); ++i) {
        CHECK(recs[i].epsilon == eps[i]);
        CHECK(recs[i].source == SweepSource::ode);
        REQUIRE(recs[i].lifespan.has_value());
        CHECK(!recs[i].config_digest.empty());
        if (i > 0) {
            // lifespan nonincreasing in epsilon (eps decreasing here), 1% slack
            CHECK(*recs[i].lifespan >= *recs[i - 1].lifespan * 0.99);
        }
    }

    // fitted slope within 10% of -(p-1)/2 with good correlation
    const auto fit = fit_powerlaw(recs, cfg.p);
    CHECK(fit.relative_deviation <= 0.10);
    CHECK(fit.r_squared >= 0.98);
    CHECK(fit.pass);
}

TEST_CASE("sweep determinism across thread counts") {
    OdeSweepConfig cfg;
    cfg.mu = 2.0;
    cfg.p = 2.0;
    cfg.K.kind = CoefficientDescriptor::Kind::cone;
    cfg.K.alpha = 1.0;
    cfg.K.n = 2;
    cfg.K.p = 2.0;
    cfg.K.R = 1.0;
    const auto eps = dyadic_grid(4, 9);
    const auto seq = sweep(cfg, eps, 1);
    const auto par = sweep(cfg, eps, 4);
    REQUIRE(seq.size() == par.size());
    for (size_t i = 0; i < seq.size(); ++i) {
        REQUIRE(seq[i].lifespan.has_value());
        REQUIRE(par[i].lifespan.has_value());
        CHECK(*seq[i].lifespan == *par[i].lifespan);  // bitwise identical
        CHECK(seq[i].config_digest == par[i].config_digest);
    }
}

TEST_CASE("singleton sweep delegates to the direct integration") {
    OdeSweepConfig cfg;
    cfg.mu = 3.0;
    cfg.p = 2.0;
    const double eps[] = {0.125};
    const auto recs = sweep(cfg, eps);
    REQUIRE(recs.size() == 1);
    const auto direct = integrate_kato(cfg.mu, cfg.p, cfg.K, 0.125, 0.125, cfg.t0,
                                       cfg.threshold, cfg.horizon, cfg.tol);
    REQUIRE(recs[0].lifespan.has_value());
    REQUIRE(direct.blowup_time.has_value());
    CHECK(*recs[0].lifespan == *direct.blowup_time);
}

TEST_CASE("pde sweep config errors are raised before any run") {
    PdeSweepConfig cfg;
    cfg.base.n = 3;
    cfg.base.alpha = 1.0;
    cfg.base.mu = 3.0;
    cfg.base.p = 2.0;
    cfg.base.R = 1.0;
    cfg.grid = RadialGrid{2.0, 64, 3};  // cone R + ln(horizon) does not fit
    cfg.horizon = 50.0;
    const double eps[] = {0.1, 0.05};
    CHECK_THROWS_AS(sweep(cfg, eps), std::invalid_argument);

    OdeSweepConfig ok;
    CHECK_THROWS_AS(sweep(ok, std::vector<double>{}), std::invalid_argument);
    CHECK_THROWS_AS(sweep(ok, std::vector<double>{0.1, -0.5}), std::invalid_argument);
}

TEST_CASE("pde sweep end to end on a small grid") {
    PdeSweepConfig cfg;
    cfg.base.n = 3;
    cfg.base.alpha = 2.0;
    cfg.base.mu = 3.0;
    cfg.base.p = 2.0;
    cfg.base.R = 1.0;
    cfg.grid = RadialGrid{2.2, 220, 3};
    cfg.threshold = 1e6;
    cfg.horizon = 500.0;
    const std::vector<double> eps{0.5, 0.4, 0.3, 0.25, 0.2};
    const auto recs = sweep(cfg, eps);
    REQUIRE(recs.size() == eps.size());
    for (size_t i = 0; i < recs.size(); ++i) {
        CHECK(recs[i].source == SweepSource::pde);
        REQUIRE(recs[i].lifespan.has_value());
        if (i > 0) CHECK(*recs[i].lifespan >= *recs[i - 1].lifespan * 0.99);
    }
}
