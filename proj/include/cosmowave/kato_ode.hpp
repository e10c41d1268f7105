#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cosmowave {

// Two flavors of the comparison-lemma machinery. The log-weighted variant
// carries a (ln t)^(-q) factor in the source term and a (ln T) correction in
// the lifespan bound; the plain variant has a constant-in-t source bound.
// Config/CLI code: 23 = log_weighted, 33 = plain.
enum class KatoVariant { log_weighted, plain };

struct KatoParams {
    double a = 0.0;
    double b = 1.0;
    double c = 1.0;  // log_weighted only
    double q = 1.0;  // log_weighted only
    double mu = 0.0;
    double p = 2.0;
    double A0 = 1.0;
    double A1 = 1.0;
    double T0 = 2.0;
    double T1 = 4.0;

    // M = (p-1)(c-a)+2 (log_weighted) or (p-1)(b-a)+2 (plain); must be positive.
    double growth_margin(KatoVariant v) const {
        const double top = (v == KatoVariant::log_weighted) ? c : b;
        return (p - 1.0) * (top - a) + 2.0;
    }
    void validate(KatoVariant v) const;
};

struct KatoIterate {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double log_D = 0.0;
    double D = 0.0;  // exp(log_D); the iteration is carried in logs
};

struct KatoSequences {
    std::vector<KatoIterate> iterates;  // j = 0..count, possibly fewer on overflow
    double E = 0.0;
    double B = 0.0;
    bool overflowed = false;
};

// Iterates a_{j+1} = p a_j + mu, b_{j+1} = p b_j + q, c_{j+1} = p c_j + mu + 2,
// D_{j+1} = A1 D_j^p / (p c_j + mu + 2)^2 from (a, b, c, A0). Stops early with
// the overflow flag once D leaves double range; log_D stays exact longer.
KatoSequences kato_sequences(const KatoParams& params, int count);

// B = (c + (mu+2)/(p-1))^(-2) A1 (log_weighted) or with b in place of c (plain).
double kato_B(const KatoParams& params, KatoVariant v);

// E = min(0, ln B)/(p-1) - 2 ln p * p/(p-1)^2 + ln A0  (the k/p^k series in closed form).
double kato_E(const KatoParams& params, KatoVariant v);

struct KatoBound {
    bool has_solution = true;
    double value = 0.0;
    std::string note;
};

// plain:        T < C * A0^(-(p-1)/M).
// log_weighted: the unique root T of T^(M/(p-1)) (ln T)^(-b-q/(p-1)) = C / A0
//               on the increasing branch; no_solution flag when the target sits
//               below the branch minimum.
KatoBound kato_bound(const KatoParams& params, KatoVariant v, double normalization);

// E + (c + (mu+2)/(p-1)) ln(t-T1) - (a + mu/(p-1)) ln t - (b + q/(p-1)) ln(ln t)
// for log_weighted; the plain variant drops the ln ln term and uses b for c.
// Positive values certify divergence of the iterated lower bounds at t.
double divergence_condition(double t, const KatoParams& params, double E, KatoVariant v);

// Source coefficient K(t) for the comparison ODE F'' + (mu/t) F' = K(t)|F|^p.
// constant: K = A1. cone: K = scale * (R + A(t))^(-n(p-1)) with A(t) the
// propagation-cone expansion for the given alpha >= 1 (requires t >= 1).
struct CoefficientDescriptor {
    enum class Kind { constant, cone };
    Kind kind = Kind::constant;
    double A1 = 1.0;
    double R = 1.0;
    double alpha = 1.0;
    int n = 3;
    double p = 2.0;
    double scale = 1.0;

    double cone_exponent() const { return n * (p - 1.0); }
    double operator()(double t) const;
    void validate(double t0) const;
};

enum class OdeTermination { threshold, horizon, step_floor };
const char* ode_termination_label(OdeTermination r);

struct OdeTrajectory {
    std::vector<double> times;
    std::vector<double> F;
    std::vector<double> Fp;
    std::optional<double> blowup_time;
    OdeTermination terminated_reason = OdeTermination::horizon;
};

struct OdeTolerances {
    double rel = 1e-10;
    double abs = 1e-12;
    double step_floor_rel = 1e-14;  // floor = step_floor_rel * max(|t|, 1)
};

// Adaptive embedded Runge-Kutta integration of F'' + (mu/t) F' = K(t) |F|^p
// from (F0, F1) at t0, until F >= threshold, t >= horizon, or the step hits
// the floor. On a threshold hit the blow-up time is extrapolated from the
// power-law asymptotics F ~ k (T-t)^(-2/(p-1)): T = t + (2/(p-1)) F/F'.
OdeTrajectory integrate_kato(double mu, double p, const CoefficientDescriptor& K,
                             double F0, double F1, double t0,
                             double threshold, double horizon,
                             const OdeTolerances& tol = {});

struct OdeSweepEntry {
    double epsilon = 0.0;
    std::optional<double> blowup_time;
    std::string failure;  // reason when blowup_time is absent
};

// Runs integrate_kato per epsilon with data F0 = eps*f0, F1 = eps*f1.
// Per-entry failures are recorded and the sweep continues.
std::vector<OdeSweepEntry> ode_lifespan_sweep(double mu, double p,
                                              const CoefficientDescriptor& K,
                                              std::span<const double> eps_list,
                                              double f0, double f1,
                                              double t0 = 1.0, double threshold = 1e10,
                                              double horizon = 1e7,
                                              const OdeTolerances& tol = {});

}  // namespace cosmowave
