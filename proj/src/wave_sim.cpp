#include "cosmowave/wave_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cosmowave {

void RadialGrid::validate() const {
    if (!(r_max > 0.0)) throw std::invalid_argument("RadialGrid: r_max must be > 0");
    if (N < 16) throw std::invalid_argument("RadialGrid: N must be >= 16");
    if (n < 2) throw std::invalid_argument("RadialGrid: n must be >= 2");
}

std::vector<double> radial_laplacian(std::span<const double> u, const RadialGrid& grid) {
    grid.validate();
    if (static_cast<int>(u.size()) != grid.N + 1)
        throw std::invalid_argument("radial_laplacian: field size does not match grid");
    const double h = grid.h();
    const double inv_h2 = 1.0 / (h * h);
    std::vector<double> lap(u.size(), 0.0);
    lap[0] = grid.n * 2.0 * (u[1] - u[0]) * inv_h2;
    for (int i = 1; i < grid.N; ++i) {
        const double r = i * h;
        lap[i] = (u[i + 1] - 2.0 * u[i] + u[i - 1]) * inv_h2 +
                 (grid.n - 1.0) / r * (u[i + 1] - u[i - 1]) / (2.0 * h);
    }
    return lap;
}

double support_radius(std::span<const double> u, const RadialGrid& grid, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("support_radius: tol must be > 0");
    for (int i = static_cast<int>(u.size()) - 1; i >= 0; --i)
        if (std::abs(u[i]) > tol) return i * grid.h();
    return 0.0;
}

double sphere_area(int n) {
    return 2.0 * std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n);
}

Functional functional_F(const RadialState& state, const RadialGrid& grid) {
    const double h = grid.h();
    const double area = sphere_area(grid.n);
    double F = 0.0, Fp = 0.0;
    for (int i = 0; i <= grid.N; ++i) {
        const double wgt = (i == 0 || i == grid.N) ? 0.5 : 1.0;
        const double rn = std::pow(i * h, grid.n - 1);
        F += wgt * state.u[i] * rn;
        Fp += wgt * state.v[i] * rn;
    }
    return {area * h * F, area * h * Fp};
}

double bump_profile(double r, double R) {
    if (r >= R) return 0.0;
    const double s = 1.0 - (r / R) * (r / R);
    return s * s * s * s;
}

WaveSimulator::WaveSimulator(const ModelParams& params, const RadialGrid& grid,
                             const SimOptions& opt)
    : prm_(params), grid_(grid), opt_(opt) {
    prm_.validate();
    grid_.validate();
    if (grid_.n != prm_.n)
        throw std::invalid_argument("WaveSimulator: grid dimension does not match ModelParams");
    if (!(prm_.alpha >= 1.0))
        throw std::invalid_argument("WaveSimulator: requires alpha >= 1");
    if (!(opt_.cfl > 0.0) || opt_.cfl > 1.0)
        throw std::invalid_argument("WaveSimulator: cfl must lie in (0, 1]");
    if (!(prm_.R < grid_.r_max))
        throw std::invalid_argument("WaveSimulator: data support R must fit inside the grid");
    if (opt_.stride < 1) throw std::invalid_argument("WaveSimulator: stride must be >= 1");

    auto u0 = opt_.u0 ? opt_.u0 : [this](double r) { return bump_profile(r, prm_.R); };
    auto u1 = opt_.u1 ? opt_.u1 : [this](double r) { return bump_profile(r, prm_.R); };
    u_.resize(grid_.N + 1);
    v0_.resize(grid_.N + 1);
    for (int i = 0; i <= grid_.N; ++i) {
        u_[i] = prm_.epsilon * u0(grid_.radius(i));
        v0_[i] = prm_.epsilon * u1(grid_.radius(i));
    }
    u_[grid_.N] = 0.0;
    v0_[grid_.N] = 0.0;
    u_old_.assign(grid_.N + 1, 0.0);
    u_old2_.assign(grid_.N + 1, 0.0);
    centered_.t = t_;
    centered_.u = u_;
    centered_.v = v0_;
    centered_.dt = 0.0;
}

double WaveSimulator::next_dt() const {
    const double h = grid_.h();
    if (opt_.dt_policy == DtPolicy::fixed) return opt_.cfl * h;
    return std::min(opt_.cfl * h * std::pow(t_, prm_.alpha), opt_.dt_cap_rel * t_);
}

std::vector<double> WaveSimulator::advance(const std::vector<double>& u_old,
                                           const std::vector<double>& u_cur, double t,
                                           double tau_prev, double tau_next) const {
    const int N = grid_.N;
    const double c2 = std::pow(t, -2.0 * prm_.alpha);
    const double mu_t = prm_.mu / t;
    const auto lap = radial_laplacian(u_cur, grid_);

    // Nonuniform three-level update: centered u_tt and u_t at time t, the
    // damping term implicit in the new level.
    const double sum = tau_prev + tau_next;
    const double a_old = 2.0 / (tau_prev * sum);
    const double a_cur = -2.0 / (tau_prev * tau_next);
    const double a_new = 2.0 / (tau_next * sum);
    const double b_old = -tau_next / (tau_prev * sum);
    const double b_cur = (tau_next - tau_prev) / (tau_prev * tau_next);
    const double b_new = tau_prev / (tau_next * sum);
    const double co_new = a_new + mu_t * b_new;

    std::vector<double> u_new(N + 1, 0.0);
    for (int i = 1; i < N; ++i) {
        double L = c2 * lap[i];
        if (opt_.nonlinearity) L += std::pow(std::abs(u_cur[i]), prm_.p);
        if (opt_.forcing) L += opt_.forcing(t, grid_.radius(i));
        const double known =
            L - (a_cur + mu_t * b_cur) * u_cur[i] - (a_old + mu_t * b_old) * u_old[i];
        u_new[i] = known / co_new;
    }
    // Origin closure: even symmetry gives u(r) = u(0) + u''(0) r^2/2 + O(r^4),
    // so u_0 = (4 u_1 - u_2)/3 to fourth order. Evolving the origin through
    // the ghost stencil instead would cap the stable Courant number at
    // 1/sqrt(n), which the cone-tracking dt policy cannot afford.
    u_new[0] = (4.0 * u_new[1] - u_new[2]) / 3.0;
    u_new[N] = 0.0;
    return u_new;
}

void WaveSimulator::step() {
    const double tau_next = next_dt();
    if (!started_) {
        // Backward Taylor seed: u(t - dt) = u - dt*v + dt^2/2 * u_tt.
        const auto lap = radial_laplacian(u_, grid_);
        const double c2 = std::pow(t_, -2.0 * prm_.alpha);
        for (int i = 0; i < grid_.N; ++i) {
            double acc = c2 * lap[i] - prm_.mu / t_ * v0_[i];
            if (opt_.nonlinearity) acc += std::pow(std::abs(u_[i]), prm_.p);
            if (opt_.forcing) acc += opt_.forcing(t_, grid_.radius(i));
            u_old_[i] = u_[i] - tau_next * v0_[i] + 0.5 * tau_next * tau_next * acc;
        }
        u_old_[grid_.N] = 0.0;
        dt_prev_ = tau_next;
        started_ = true;
    }

    auto u_new = advance(u_old_, u_, t_, dt_prev_, tau_next);

    // Centered velocity at the level being completed (time t_).
    const double sum = dt_prev_ + tau_next;
    centered_.t = t_;
    centered_.dt = tau_next;
    centered_.u = u_;
    centered_.v.resize(grid_.N + 1);
    for (int i = 0; i <= grid_.N; ++i) {
        centered_.v[i] = -u_old_[i] * tau_next / (dt_prev_ * sum) +
                         u_[i] * (tau_next - dt_prev_) / (dt_prev_ * tau_next) +
                         u_new[i] * dt_prev_ / (tau_next * sum);
    }

    // Rotate buffers, keeping two history levels for crossing refinement.
    dt_prev2_ = dt_prev_;
    u_old2_.swap(u_old_);
    u_old_.swap(u_);
    u_.swap(u_new);
    t_ += tau_next;
    dt_prev_ = tau_next;
    ++steps_;
}

double WaveSimulator::refine_last_crossing(double threshold) const {
    if (steps_ < 1) throw std::logic_error("refine_last_crossing: no step taken");
    const double t_pre = t_ - dt_prev_;
    auto max_after = [&](double tau) {
        const auto trial = advance(u_old2_, u_old_, t_pre, dt_prev2_, tau);
        double m = 0.0;
        for (double x : trial) m = std::max(m, std::abs(x));
        return m;
    };
    double lo = 0.0, hi = dt_prev_;
    if (max_after(hi) < threshold) return t_;  // crossing not reproducible; keep the step end
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (max_after(mid) >= threshold)
            hi = mid;
        else
            lo = mid;
        if (hi - lo <= 1e-6 * dt_prev_) break;
    }
    return t_pre + hi;
}

double WaveSimulator::max_abs_u() const {
    double m = 0.0;
    for (double x : u_) m = std::max(m, std::abs(x));
    return m;
}

bool WaveSimulator::finite() const {
    for (double x : u_)
        if (!std::isfinite(x)) return false;
    return true;
}

RadialState WaveSimulator::state() const {
    RadialState s;
    s.t = t_;
    s.u = u_;
    s.dt = dt_prev_;
    s.v.resize(grid_.N + 1, 0.0);
    if (!started_) {
        s.v = v0_;
        return s;
    }
    // One-sided second-order velocity at the frontier, the damping part
    // solved implicitly: u_old = u - dt*v + dt^2/2 (acc0 - (mu/t) v).
    const auto lap = radial_laplacian(u_, grid_);
    const double c2 = std::pow(t_, -2.0 * prm_.alpha);
    for (int i = 0; i < grid_.N; ++i) {
        double acc0 = c2 * lap[i];
        if (opt_.nonlinearity) acc0 += std::pow(std::abs(u_[i]), prm_.p);
        if (opt_.forcing) acc0 += opt_.forcing(t_, grid_.radius(i));
        const double base = (u_[i] - u_old_[i]) / dt_prev_ + 0.5 * dt_prev_ * acc0;
        s.v[i] = base / (1.0 + 0.5 * dt_prev_ * prm_.mu / t_);
    }
    s.v[grid_.N] = 0.0;
    return s;
}

const char* sim_termination_label(SimTermination r) {
    switch (r) {
        case SimTermination::threshold: return "threshold";
        case SimTermination::horizon: return "horizon";
        case SimTermination::nonfinite: return "nonfinite";
    }
    return "?";
}

namespace {

SimSample make_sample(const RadialState& st, const RadialGrid& grid, double tol) {
    SimSample s;
    s.t = st.t;
    for (double x : st.u) s.max_u = std::max(s.max_u, std::abs(x));
    s.support_r = support_radius(st.u, grid, tol);
    const auto f = functional_F(st, grid);
    s.F = f.F;
    s.Fprime = f.Fp;
    return s;
}

}  // namespace

SimResult run_to_blowup(const ModelParams& params, const RadialGrid& grid, double threshold,
                        double horizon, const SimOptions& opt) {
    params.validate();
    grid.validate();
    if (!(horizon > 1.0)) throw std::invalid_argument("run_to_blowup: horizon must exceed 1");
    if (!(threshold > 0.0)) throw std::invalid_argument("run_to_blowup: threshold must be > 0");

    const double h = grid.h();
    const double cone_end = params.R + cone_expansion(params.alpha, horizon);
    if (!(grid.r_max >= cone_end + 8.0 * h))
        throw std::invalid_argument(
            "run_to_blowup: r_max too small, the propagation cone reaches the outer boundary "
            "before the horizon");

    WaveSimulator sim(params, grid, opt);
    SimResult res;
    res.h = h;
    const double init_max = sim.max_abs_u();
    res.support_tol =
        std::max(opt.support_tol_factor * init_max, std::numeric_limits<double>::min());
    if (threshold <= init_max)
        throw std::invalid_argument("run_to_blowup: threshold must exceed the initial amplitude");

    res.history.push_back(make_sample(sim.state(), grid, res.support_tol));

    while (true) {
        if (sim.time() >= horizon) {
            res.terminated_reason = SimTermination::horizon;
            break;
        }
        sim.step();
        if (!sim.finite()) {
            res.terminated_reason = SimTermination::nonfinite;
            res.lifespan_estimate = sim.time();
            break;
        }
        if (sim.max_abs_u() >= threshold) {
            res.terminated_reason = SimTermination::threshold;
            res.lifespan_estimate = sim.refine_last_crossing(threshold);
            break;
        }
        if (sim.steps() % opt.stride == 0)
            res.history.push_back(make_sample(sim.centered(), grid, res.support_tol));
    }
    res.history.push_back(make_sample(sim.state(), grid, res.support_tol));
    return res;
}

ConeReport verify_cone(const SimResult& result, const LightCone& cone, const RadialGrid& grid) {
    ConeReport rep;
    rep.samples = static_cast<int>(result.history.size());
    const double h = grid.h();
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& s : result.history)
        worst = std::max(worst, s.support_r - (cone.radius(s.t) + 3.0 * h));
    if (result.history.empty()) worst = 0.0;
    rep.max_violation_h = worst / h;
    rep.pass = worst <= 1e-9 * h;
    return rep;
}

}  // namespace cosmowave
