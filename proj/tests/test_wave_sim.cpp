#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "cosmowave/kato_ode.hpp"
#include "cosmowave/wave_sim.hpp"

using namespace cosmowave;

namespace {

ModelParams model(int n, double alpha, double mu, double p, double eps, double R = 1.0) {
    ModelParams m;
    m.n = n;
    m.alpha = alpha;
    m.mu = mu;
    m.p = p;
    m.epsilon = eps;
    m.R = R;
    return m;
}

double mms_error(int N, double alpha, double mu, double p) {
    // Exact solution u*(t, r) = exp(-r^2)/t with the matching forcing term.
    ModelParams prm = model(3, alpha, mu, p, 1.0, 4.9);
    RadialGrid grid{5.0, N, 3};
    SimOptions opt;
    opt.cfl = 0.5;
    opt.u0 = [](double r) { return std::exp(-r * r); };
    opt.u1 = [](double r) { return -std::exp(-r * r); };
    opt.forcing = [alpha, mu, p](double t, double r) {
        const double E = std::exp(-r * r);
        const double us = E / t;
        return 2.0 * E / (t * t * t) -
               std::pow(t, -2.0 * alpha) * (4.0 * r * r - 6.0) * E / t - mu / t * E / (t * t) -
               std::pow(us, p);
    };
    WaveSimulator sim(prm, grid, opt);
    const int steps = static_cast<int>(std::lround(1.0 / sim.next_dt()));
    for (int s = 0; s < steps; ++s) sim.step();
    const double t = sim.time();
    double err = 0.0;
    for (int i = 0; i < grid.N; ++i) {
        const double ex = std::exp(-grid.radius(i) * grid.radius(i)) / t;
        err = std::max(err, std::abs(sim.u()[i] - ex));
    }
    return err;
}

}  // namespace

TEST_CASE("radial laplacian: quadratic is exact") {
    RadialGrid grid{2.0, 64, 3};
    std::vector<double> u(grid.N + 1);
    for (int i = 0; i <= grid.N; ++i) u[i] = grid.radius(i) * grid.radius(i);
    const auto lap = radial_laplacian(u, grid);
    for (int i = 0; i < grid.N; ++i)
        CHECK(lap[i] == doctest::Approx(6.0).epsilon(1e-10));
}

TEST_CASE("radial laplacian: constants and refinement order") {
    RadialGrid grid{2.0, 64, 2};
    std::vector<double> u(grid.N + 1, 3.25);
    const auto lap = radial_laplacian(u, grid);
    for (int i = 0; i < grid.N; ++i) CHECK(lap[i] == doctest::Approx(0.0));

    // u = cos(r), n = 2: exact laplacian -cos(r) - sin(r)/r
    auto err_at_one = [](int N) {
        RadialGrid g{2.0, N, 2};
        std::vector<double> f(g.N + 1);
        for (int i = 0; i <= g.N; ++i) f[i] = std::cos(g.radius(i));
        const auto l = radial_laplacian(f, g);
        const int i1 = N / 2;  // node at r = 1
        const double exact = -std::cos(1.0) - std::sin(1.0);
        return std::abs(l[i1] - exact);
    };
    const double e1 = err_at_one(64), e2 = err_at_one(128), e3 = err_at_one(256);
    CHECK(std::log2(e1 / e2) >= 1.9);
    CHECK(std::log2(e2 / e3) >= 1.9);
}

TEST_CASE("functional quadrature") {
    CHECK(sphere_area(3) == doctest::Approx(4.0 * M_PI).epsilon(1e-14));
    CHECK(sphere_area(2) == doctest::Approx(2.0 * M_PI).epsilon(1e-14));

    // indicator of the unit ball in 3d: the jump costs O(h) in the trapezoid
    RadialGrid grid{2.0, 400, 3};
    RadialState st;
    st.t = 1.0;
    st.u.assign(grid.N + 1, 0.0);
    st.v.assign(grid.N + 1, 0.0);
    for (int i = 0; i <= grid.N; ++i)
        if (grid.radius(i) <= 1.0) st.u[i] = 1.0;
    const auto f = functional_F(st, grid);
    CHECK(std::abs(f.F - 4.0 * M_PI / 3.0) <= 4.0 * M_PI * grid.h());
    CHECK(f.Fp == 0.0);

    // smoothed profile (1 - r^2)^2 on r <= 1: exact integral 4 pi * 8/105,
    // trapezoid error O(h^2)
    for (int i = 0; i <= grid.N; ++i) {
        const double r = grid.radius(i);
        st.u[i] = (r < 1.0) ? (1.0 - r * r) * (1.0 - r * r) : 0.0;
    }
    const auto fs = functional_F(st, grid);
    CHECK(std::abs(fs.F - 4.0 * M_PI * 8.0 / 105.0) <= 10.0 * grid.h() * grid.h());
}

TEST_CASE("support radius of the initial bump") {
    ModelParams prm = model(3, 2.0, 3.0, 2.0, 0.5);
    RadialGrid grid{2.5, 250, 3};
    WaveSimulator sim(prm, grid);
    const double tol = 1e-12 * sim.max_abs_u();
    const double s = support_radius(sim.u(), grid, tol);
    CHECK(std::abs(s - prm.R) <= grid.h() + 1e-12);
    CHECK_THROWS_AS(support_radius(sim.u(), grid, 0.0), std::invalid_argument);
}

TEST_CASE("zero data stays exactly zero") {
    ModelParams prm = model(3, 1.0, 3.0, 2.0, 1.0);
    RadialGrid grid{4.0, 64, 3};
    SimOptions opt;
    opt.u0 = [](double) { return 0.0; };
    opt.u1 = [](double) { return 0.0; };
    WaveSimulator sim(prm, grid, opt);
    for (int s = 0; s < 100; ++s) sim.step();
    for (double x : sim.u()) CHECK(x == 0.0);
}

TEST_CASE("manufactured solution converges at second order") {
    const double e1 = mms_error(80, 1.0, 2.0, 2.0);
    const double e2 = mms_error(160, 1.0, 2.0, 2.0);
    const double e3 = mms_error(320, 1.0, 2.0, 2.0);
    CHECK(std::log2(e1 / e2) >= 1.9);
    CHECK(std::log2(e2 / e3) >= 1.9);
}

TEST_CASE("linear regime: discrete energy is non-increasing") {
    ModelParams prm = model(3, 1.0, 0.0, 2.0, 1.0, 4.9);
    RadialGrid grid{5.0, 400, 3};
    SimOptions opt;
    opt.cfl = 0.5;
    opt.nonlinearity = false;
    opt.u0 = [](double r) { return std::exp(-4.0 * r * r); };
    opt.u1 = [](double) { return 0.0; };
    WaveSimulator sim(prm, grid, opt);
    auto energy = [&](const RadialState& st) {
        const double h = grid.h();
        double E = 0;
        for (int i = 0; i <= grid.N; ++i) {
            const double w = (i == 0 || i == grid.N) ? 0.5 : 1.0;
            double ur = 0.0;
            if (i > 0 && i < grid.N)
                ur = (st.u[i + 1] - st.u[i - 1]) / (2 * h);
            else if (i == grid.N)
                ur = (st.u[i] - st.u[i - 1]) / h;
            E += w * (st.v[i] * st.v[i] + std::pow(st.t, -2.0) * ur * ur) *
                 std::pow(i * h, 2);
        }
        return 0.5 * sphere_area(3) * h * E;
    };
    const double dt = sim.next_dt();
    double Eprev = energy(sim.state());
    const double E0 = Eprev;
    const double drift_tol = 10.0 * dt * dt * E0;  // O(dt^2) drift allowance per step
    for (int s = 0; s < static_cast<int>(2.0 / dt); ++s) {
        sim.step();
        const double E = energy(sim.centered());
        CHECK(E <= Eprev + drift_tol);
        Eprev = E;
    }
    CHECK(Eprev < E0);  // strict loss through the decaying wave speed
}

TEST_CASE("run_to_blowup: zero amplitude reaches the horizon") {
    ModelParams prm = model(3, 2.0, 3.0, 2.0, 0.0);
    RadialGrid grid{2.5, 128, 3};
    const auto res = run_to_blowup(prm, grid, 1e6, 5.0, SimOptions{});
    CHECK(res.terminated_reason == SimTermination::horizon);
    CHECK_FALSE(res.lifespan_estimate.has_value());
}

TEST_CASE("run_to_blowup: finite lifespan, refinement and threshold stability") {
    ModelParams prm = model(3, 2.0, 3.0, 2.0, 0.5);
    RadialGrid grid{2.2, 500, 3};
    const auto base = run_to_blowup(prm, grid, 1e6, 1000.0, SimOptions{});
    CHECK(base.terminated_reason == SimTermination::threshold);
    REQUIRE(base.lifespan_estimate.has_value());
    const double T = *base.lifespan_estimate;
    CHECK(T > 1.0);

    RadialGrid fine{2.2, 1000, 3};
    const auto ref = run_to_blowup(prm, fine, 1e6, 1000.0, SimOptions{});
    REQUIRE(ref.lifespan_estimate.has_value());
    CHECK(std::abs(*ref.lifespan_estimate - T) <= 0.02 * T);

    const auto hi = run_to_blowup(prm, grid, 1e8, 1000.0, SimOptions{});
    REQUIRE(hi.lifespan_estimate.has_value());
    CHECK(std::abs(*hi.lifespan_estimate - T) <= 0.01 * T);
}

TEST_CASE("run_to_blowup rejects a cone-touching grid") {
    ModelParams prm = model(3, 1.0, 3.0, 2.0, 0.1);
    RadialGrid grid{2.0, 128, 3};  // R + ln(50) ~ 4.9 does not fit
    CHECK_THROWS_AS(run_to_blowup(prm, grid, 1e6, 50.0, SimOptions{}), std::invalid_argument);
}

TEST_CASE("cone containment under the cone-tracking step policy") {
    SimOptions opt;
    opt.dt_policy = DtPolicy::cone;
    opt.cfl = 1.0;
    opt.stride = 4;

    // alpha = 1 to t = e: support <= R + 1 + 3h
    ModelParams prm = model(3, 1.0, 3.0, 3.0, 1e-2);
    RadialGrid grid{3.0, 600, 3};
    const auto res = run_to_blowup(prm, grid, 1e6, std::exp(1.0), opt);
    CHECK(res.terminated_reason == SimTermination::horizon);
    const auto rep = verify_cone(res, LightCone{1.0, prm.R}, grid);
    CHECK(rep.pass);
    for (const auto& s : res.history)
        CHECK(s.support_r <= prm.R + 1.0 + 3.0 * grid.h() + 1e-12);

    // alpha = 3: globally bounded cone R + 1/2; A(15) is within 0.3% of 1/2
    ModelParams prm3 = model(3, 3.0, 3.0, 3.0, 1e-2);
    RadialGrid grid3{2.0, 500, 3};
    SimOptions opt3 = opt;
    opt3.dt_cap_rel = 0.25;
    const auto res3 = run_to_blowup(prm3, grid3, 1e6, 15.0, opt3);
    const auto rep3 = verify_cone(res3, LightCone{3.0, prm3.R}, grid3);
    CHECK(rep3.pass);
    for (const auto& s : res3.history)
        CHECK(s.support_r <= prm3.R + 0.5 + 3.0 * grid3.h() + 1e-12);
}

TEST_CASE("verify_cone on empty support") {
    ModelParams prm = model(3, 2.0, 3.0, 2.0, 0.0);
    RadialGrid grid{2.5, 128, 3};
    const auto res = run_to_blowup(prm, grid, 1e6, 5.0, SimOptions{});
    const auto rep = verify_cone(res, LightCone{2.0, prm.R}, grid);
    CHECK(rep.pass);
    for (const auto& s : res.history) CHECK(s.support_r == 0.0);
}

TEST_CASE("functional positivity and damped-slope monotonicity") {
    ModelParams prm = model(3, 2.0, 3.0, 2.0, 0.3);
    RadialGrid grid{2.2, 400, 3};
    SimOptions opt;
    opt.stride = 8;
    const auto res = run_to_blowup(prm, grid, 1e6, 400.0, opt);
    REQUIRE(res.history.size() > 10);
    const double F1 = res.history.front().F;
    CHECK(F1 > 0.0);
    double scale = 0.0;
    for (const auto& s : res.history)
        scale = std::max(scale, std::abs(std::pow(s.t, prm.mu) * s.Fprime));
    double prev = -1e300;
    for (const auto& s : res.history) {
        CHECK(s.F >= F1 * (1.0 - 1e-9));
        const double g = std::pow(s.t, prm.mu) * s.Fprime;
        CHECK(g >= prev - 1e-6 * scale);
        prev = g;
    }
}

TEST_CASE("functional inequality and domination of the cone ODE model") {
    // Hoelder with the ball-volume constant:
    //   F'' + (mu/t) F' = int |u|^p >= F^p / (vol_n (R+A)^n)^(p-1).
    ModelParams prm = model(3, 2.0, 3.0, 2.0, 0.5);
    RadialGrid grid{2.2, 800, 3};
    SimOptions opt;
    opt.stride = 16;
    const auto res = run_to_blowup(prm, grid, 1e6, 1000.0, opt);
    REQUIRE(res.lifespan_estimate.has_value());

    const double vol3 = 4.0 * M_PI / 3.0;
    const double w_scale = std::pow(vol3, -(prm.p - 1.0));
    int checked = 0;
    for (size_t i = 1; i + 1 < res.history.size(); ++i) {
        const auto &a = res.history[i - 1], &b = res.history[i], &c = res.history[i + 1];
        const double dt1 = b.t - a.t, dt2 = c.t - b.t;
        if (std::abs(dt1 - dt2) > 1e-9 * dt1) continue;  // skip seed-adjacent triples
        if (b.F > 1e3) break;
        const double Fpp = (c.F - 2.0 * b.F + a.F) / (dt1 * dt2);
        const double lhs = Fpp + prm.mu / b.t * b.Fprime;
        const double rhs = w_scale *
                           std::pow(prm.R + cone_expansion(prm.alpha, b.t),
                                    -prm.n * (prm.p - 1.0)) *
                           std::pow(b.F, prm.p);
        CHECK(lhs >= rhs * (1.0 - 0.05) - 1e-12);
        ++checked;
    }
    CHECK(checked > 100);

    // The PDE functional dominates the volume-corrected cone ODE trajectory
    // launched from the same data.
    CoefficientDescriptor K;
    K.kind = CoefficientDescriptor::Kind::cone;
    K.R = prm.R;
    K.alpha = prm.alpha;
    K.n = prm.n;
    K.p = prm.p;
    K.scale = w_scale;
    const double F1 = res.history.front().F;
    const double Fp1 = res.history.front().Fprime;
    const auto ode = integrate_kato(prm.mu, prm.p, K, F1, Fp1, 1.0, 1e10, 2000.0);
    size_t j = 0;
    int compared = 0;
    for (const auto& s : res.history) {
        while (j + 1 < ode.times.size() && ode.times[j + 1] <= s.t) ++j;
        if (j + 1 >= ode.times.size() || ode.times[j] > s.t) continue;
        const double w = (s.t - ode.times[j]) / (ode.times[j + 1] - ode.times[j]);
        const double fo = (1.0 - w) * ode.F[j] + w * ode.F[j + 1];
        CHECK(s.F >= fo * (1.0 - 1e-6));
        ++compared;
    }
    CHECK(compared > 100);
}

TEST_CASE("simulator input validation") {
    ModelParams prm = model(3, 0.5, 3.0, 2.0, 1.0);
    RadialGrid grid{2.5, 128, 3};
    CHECK_THROWS_AS(WaveSimulator(prm, grid), std::invalid_argument);  // alpha < 1
    ModelParams ok = model(3, 1.0, 3.0, 2.0, 1.0);
    RadialGrid mismatched{2.5, 128, 2};
    CHECK_THROWS_AS(WaveSimulator(ok, mismatched), std::invalid_argument);
    RadialGrid tiny{2.5, 8, 3};
    CHECK_THROWS_AS(tiny.validate(), std::invalid_argument);
}
