#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "cosmowave/cone.hpp"
#include "cosmowave/exponents.hpp"

namespace cosmowave {

struct RadialGrid {
    double r_max = 4.0;
    int N = 256;  // cells; nodes r_i = i*h, i = 0..N
    int n = 3;    // dimension for the radial Laplacian

    double h() const { return r_max / N; }
    double radius(int i) const { return i * h(); }
    void validate() const;
};

// Second-order radial Laplacian u_rr + (n-1)/r u_r. At r = 0 the symmetry
// limit n*u_rr(0) with ghost node u[-1] = u[1]; the outer node is Dirichlet.
std::vector<double> radial_laplacian(std::span<const double> u, const RadialGrid& grid);

struct RadialState {
    double t = 1.0;
    std::vector<double> u;
    std::vector<double> v;  // u_t
    double dt = 0.0;
};

// Largest node radius with |u| > tol, else 0.
double support_radius(std::span<const double> u, const RadialGrid& grid, double tol);

double sphere_area(int n);  // |S^{n-1}| = 2 pi^{n/2} / Gamma(n/2)

struct Functional {
    double F = 0.0;   // integral of u over R^n (radial trapezoid)
    double Fp = 0.0;  // integral of u_t
};
Functional functional_F(const RadialState& state, const RadialGrid& grid);

// Time-step policy. fixed: dt = cfl*h (safe since the wave speed t^-alpha <= 1
// for t >= 1). cone: dt = cfl*h*t^alpha capped at dt_cap_rel*t, which keeps the
// local Courant number at cfl and pins the numerical domain of dependence to
// the propagation cone.
enum class DtPolicy { fixed, cone };

struct SimOptions {
    double cfl = 0.5;
    DtPolicy dt_policy = DtPolicy::fixed;
    double dt_cap_rel = 0.05;  // cone policy: dt <= dt_cap_rel * t
    bool nonlinearity = true;
    int stride = 16;  // history sampling stride, in steps
    std::function<double(double, double)> forcing;  // g(t, r), optional
    std::function<double(double)> u0;  // data profiles; defaults to the C^2 bump
    std::function<double(double)> u1;
    double support_tol_factor = 1e-12;  // support tol = factor * max|u| at t = 1
};

// Compactly supported C^2 bump (1 - (r/R)^2)^4 on r < R, 0 beyond.
double bump_profile(double r, double R);

class WaveSimulator {
  public:
    WaveSimulator(const ModelParams& params, const RadialGrid& grid, const SimOptions& opt = {});

    void step();
    // After a step that crossed the threshold: bisects the crossing time
    // inside that step by re-taking it with smaller dt from the kept levels.
    double refine_last_crossing(double threshold) const;

    double time() const { return t_; }
    double next_dt() const;
    long steps() const { return steps_; }
    const std::vector<double>& u() const { return u_; }
    double max_abs_u() const;
    bool finite() const;

    // Frontier state; v is reconstructed one-sided to second order.
    RadialState state() const;
    // Previous complete level with the centered velocity, valid after step().
    const RadialState& centered() const { return centered_; }

    const ModelParams& params() const { return prm_; }
    const RadialGrid& grid() const { return grid_; }

  private:
    std::vector<double> advance(const std::vector<double>& u_old, const std::vector<double>& u_cur,
                                double t, double tau_prev, double tau_next) const;

    ModelParams prm_;
    RadialGrid grid_;
    SimOptions opt_;
    std::vector<double> u_old2_;  // two levels back, kept for crossing refinement
    std::vector<double> u_old_;
    std::vector<double> u_;
    std::vector<double> v0_;  // exact initial velocity, used to seed the first step
    RadialState centered_;
    double t_ = 1.0;
    double dt_prev_ = 0.0;
    double dt_prev2_ = 0.0;
    long steps_ = 0;
    bool started_ = false;
};

enum class SimTermination { threshold, horizon, nonfinite };
const char* sim_termination_label(SimTermination r);

struct SimSample {
    double t = 0.0;
    double max_u = 0.0;
    double support_r = 0.0;
    double F = 0.0;
    double Fprime = 0.0;
};

struct SimResult {
    std::optional<double> lifespan_estimate;
    std::vector<SimSample> history;
    SimTermination terminated_reason = SimTermination::horizon;
    double h = 0.0;
    double support_tol = 0.0;
};

// Steps until max|u| >= threshold (lifespan = crossing time, bisected within
// the last step), t >= horizon, or non-finite values. The grid must keep the
// propagation cone away from the outer boundary through the horizon.
SimResult run_to_blowup(const ModelParams& params, const RadialGrid& grid,
                        double threshold, double horizon, const SimOptions& opt = {});

struct ConeReport {
    double max_violation_h = 0.0;  // max over samples of (support - (R + A(t) + 3h))/h
    bool pass = true;
    int samples = 0;
};

// Checks support_radius(t) <= R + A(t) + 3h on every recorded sample.
ConeReport verify_cone(const SimResult& result, const LightCone& cone, const RadialGrid& grid);

}  // namespace cosmowave
