#include "cosmowave/kato_ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cosmowave/cone.hpp"
#include "cosmowave/roots.hpp"

namespace cosmowave {

void KatoParams::validate(KatoVariant v) const {
    if (!(p > 1.0)) throw std::invalid_argument("KatoParams: p must be > 1");
    if (!(a >= 0.0)) throw std::invalid_argument("KatoParams: a must be >= 0");
    if (!(b > 0.0)) throw std::invalid_argument("KatoParams: b must be > 0");
    if (!(mu >= 0.0)) throw std::invalid_argument("KatoParams: mu must be >= 0");
    if (!(A0 > 0.0)) throw std::invalid_argument("KatoParams: A0 must be > 0");
    if (!(A1 > 0.0)) throw std::invalid_argument("KatoParams: A1 must be > 0");
    if (!(T0 > 1.0)) throw std::invalid_argument("KatoParams: T0 must exceed 1");
    if (!(T1 > T0)) throw std::invalid_argument("KatoParams: T1 must exceed T0");
    if (v == KatoVariant::log_weighted) {
        if (!(c > 0.0)) throw std::invalid_argument("KatoParams: c must be > 0");
        if (!(q > 0.0)) throw std::invalid_argument("KatoParams: q must be > 0");
    }
    if (!(growth_margin(v) > 0.0))
        throw std::invalid_argument("KatoParams: M = (p-1)(growth-a)+2 must be positive");
}

KatoSequences kato_sequences(const KatoParams& prm, int count) {
    prm.validate(KatoVariant::log_weighted);
    if (count < 1) throw std::invalid_argument("kato_sequences: count must be >= 1");

    KatoSequences out;
    out.B = kato_B(prm, KatoVariant::log_weighted);
    out.E = kato_E(prm, KatoVariant::log_weighted);
    out.iterates.reserve(count + 1);

    KatoIterate it{prm.a, prm.b, prm.c, std::log(prm.A0), prm.A0};
    out.iterates.push_back(it);
    for (int j = 0; j < count; ++j) {
        KatoIterate next;
        next.a = prm.p * it.a + prm.mu;
        next.b = prm.p * it.b + prm.q;
        next.c = prm.p * it.c + prm.mu + 2.0;
        const double denom = prm.p * it.c + prm.mu + 2.0;
        next.log_D = std::log(prm.A1) + prm.p * it.log_D - 2.0 * std::log(denom);
        next.D = std::exp(next.log_D);
        if (!std::isfinite(next.D) || !std::isfinite(next.c)) {
            out.overflowed = true;
            break;
        }
        out.iterates.push_back(next);
        it = next;
    }
    return out;
}

double kato_B(const KatoParams& prm, KatoVariant v) {
    prm.validate(v);
    const double top = (v == KatoVariant::log_weighted) ? prm.c : prm.b;
    const double base = top + (prm.mu + 2.0) / (prm.p - 1.0);
    return prm.A1 / (base * base);
}

double kato_E(const KatoParams& prm, KatoVariant v) {
    const double B = kato_B(prm, v);
    const double p = prm.p;
    // sum_{k>=0} k/p^k = p/(p-1)^2
    const double series = p / ((p - 1.0) * (p - 1.0));
    return std::min(0.0, std::log(B)) / (p - 1.0) - 2.0 * std::log(p) * series +
           std::log(prm.A0);
}

KatoBound kato_bound(const KatoParams& prm, KatoVariant v, double normalization) {
    prm.validate(v);
    if (!(normalization > 0.0))
        throw std::invalid_argument("kato_bound: normalization must be > 0");
    const double M = prm.growth_margin(v);

    KatoBound out;
    if (v == KatoVariant::plain) {
        out.value = normalization * std::pow(prm.A0, -(prm.p - 1.0) / M);
        return out;
    }
    const double s = M / (prm.p - 1.0);
    const double r = prm.b + prm.q / (prm.p - 1.0);
    const double target = normalization / prm.A0;
    const auto T = solve_power_log(s, r, target);
    if (!T) {
        out.has_solution = false;
        out.note = "target below the minimum of the monotone branch";
        return out;
    }
    out.value = *T;
    return out;
}

double divergence_condition(double t, const KatoParams& prm, double E, KatoVariant v) {
    prm.validate(v);
    if (!(t > prm.T1)) throw std::domain_error("divergence_condition: requires t > T1");
    const double pm1 = prm.p - 1.0;
    if (v == KatoVariant::log_weighted) {
        return E + (prm.c + (prm.mu + 2.0) / pm1) * std::log(t - prm.T1) -
               (prm.a + prm.mu / pm1) * std::log(t) -
               (prm.b + prm.q / pm1) * std::log(std::log(t));
    }
    return E + (prm.b + (prm.mu + 2.0) / pm1) * std::log(t - prm.T1) -
           (prm.a + prm.mu / pm1) * std::log(t);
}

double CoefficientDescriptor::operator()(double t) const {
    if (kind == Kind::constant) return A1;
    const double base = R + cone_expansion(alpha, t);
    return scale * std::pow(base, -cone_exponent());
}

void CoefficientDescriptor::validate(double t0) const {
    if (kind == Kind::constant) {
        if (!(A1 > 0.0)) throw std::invalid_argument("CoefficientDescriptor: A1 must be > 0");
        return;
    }
    if (!(R > 0.0)) throw std::invalid_argument("CoefficientDescriptor: R must be > 0");
    if (!(alpha >= 1.0)) throw std::invalid_argument("CoefficientDescriptor: cone form requires alpha >= 1");
    if (n < 2) throw std::invalid_argument("CoefficientDescriptor: n must be >= 2");
    if (!(p > 1.0)) throw std::invalid_argument("CoefficientDescriptor: p must be > 1");
    if (!(scale > 0.0)) throw std::invalid_argument("CoefficientDescriptor: scale must be > 0");
    if (!(t0 >= 1.0)) throw std::invalid_argument("CoefficientDescriptor: cone form requires t0 >= 1");
}

const char* ode_termination_label(OdeTermination r) {
    switch (r) {
        case OdeTermination::threshold: return "threshold";
        case OdeTermination::horizon: return "horizon";
        case OdeTermination::step_floor: return "step_floor";
    }
    return "?";
}

namespace {

// Dormand-Prince 5(4) coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                 e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                 e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

struct Pair {
    double F, Fp;
};

}  // namespace

OdeTrajectory integrate_kato(double mu, double p, const CoefficientDescriptor& K,
                             double F0, double F1, double t0,
                             double threshold, double horizon, const OdeTolerances& tol) {
    if (F0 < 0.0) throw std::invalid_argument("integrate_kato: F0 must be nonnegative");
    if (F1 < 0.0) throw std::invalid_argument("integrate_kato: F1 must be nonnegative");
    if (!(p > 1.0)) throw std::invalid_argument("integrate_kato: p must be > 1");
    if (!(mu >= 0.0)) throw std::invalid_argument("integrate_kato: mu must be >= 0");
    if (mu > 0.0 && !(t0 > 0.0))
        throw std::invalid_argument("integrate_kato: positive mu requires t0 > 0");
    if (!(threshold > F0)) throw std::invalid_argument("integrate_kato: threshold must exceed F0");
    if (!(horizon > t0)) throw std::invalid_argument("integrate_kato: horizon must exceed t0");
    K.validate(t0);

    auto rhs = [&](double t, const Pair& y) -> Pair {
        const double damping = (mu != 0.0) ? mu / t * y.Fp : 0.0;
        return {y.Fp, K(t) * std::pow(std::abs(y.F), p) - damping};
    };

    OdeTrajectory traj;
    double t = t0;
    Pair y{F0, F1};
    traj.times.push_back(t);
    traj.F.push_back(y.F);
    traj.Fp.push_back(y.Fp);

    double h = std::min(1e-3 * std::max(1.0, std::abs(t0)), (horizon - t0) / 10.0);
    Pair k1 = rhs(t, y);

    while (true) {
        const double floor = tol.step_floor_rel * std::max(std::abs(t), 1.0);
        if (horizon - t <= floor) {
            traj.terminated_reason = OdeTermination::horizon;
            break;
        }
        if (h < floor) {
            traj.terminated_reason = OdeTermination::step_floor;
            break;
        }
        if (t + h > horizon) h = horizon - t;

        const Pair k2 = rhs(t + c2 * h, {y.F + h * a21 * k1.F, y.Fp + h * a21 * k1.Fp});
        const Pair k3 = rhs(t + c3 * h, {y.F + h * (a31 * k1.F + a32 * k2.F),
                                         y.Fp + h * (a31 * k1.Fp + a32 * k2.Fp)});
        const Pair k4 = rhs(t + c4 * h,
                            {y.F + h * (a41 * k1.F + a42 * k2.F + a43 * k3.F),
                             y.Fp + h * (a41 * k1.Fp + a42 * k2.Fp + a43 * k3.Fp)});
        const Pair k5 =
            rhs(t + c5 * h, {y.F + h * (a51 * k1.F + a52 * k2.F + a53 * k3.F + a54 * k4.F),
                             y.Fp + h * (a51 * k1.Fp + a52 * k2.Fp + a53 * k3.Fp + a54 * k4.Fp)});
        const Pair k6 = rhs(
            t + h, {y.F + h * (a61 * k1.F + a62 * k2.F + a63 * k3.F + a64 * k4.F + a65 * k5.F),
                    y.Fp + h * (a61 * k1.Fp + a62 * k2.Fp + a63 * k3.Fp + a64 * k4.Fp +
                                a65 * k5.Fp)});
        const Pair y5{y.F + h * (b1 * k1.F + b3 * k3.F + b4 * k4.F + b5 * k5.F + b6 * k6.F),
                      y.Fp + h * (b1 * k1.Fp + b3 * k3.Fp + b4 * k4.Fp + b5 * k5.Fp + b6 * k6.Fp)};
        const Pair k7 = rhs(t + h, y5);  // FSAL

        const double errF = h * (e1 * k1.F + e3 * k3.F + e4 * k4.F + e5 * k5.F + e6 * k6.F +
                                 e7 * k7.F);
        const double errFp = h * (e1 * k1.Fp + e3 * k3.Fp + e4 * k4.Fp + e5 * k5.Fp +
                                  e6 * k6.Fp + e7 * k7.Fp);
        const double sF = tol.abs + tol.rel * std::max(std::abs(y.F), std::abs(y5.F));
        const double sFp = tol.abs + tol.rel * std::max(std::abs(y.Fp), std::abs(y5.Fp));
        const double err = std::sqrt(0.5 * ((errF / sF) * (errF / sF) +
                                            (errFp / sFp) * (errFp / sFp)));

        if (!std::isfinite(err) || !std::isfinite(y5.F) || !std::isfinite(y5.Fp)) {
            h *= 0.5;
            continue;
        }
        if (err <= 1.0) {
            t += h;
            y = y5;
            k1 = k7;
            traj.times.push_back(t);
            traj.F.push_back(y.F);
            traj.Fp.push_back(y.Fp);
            if (y.F >= threshold) {
                traj.terminated_reason = OdeTermination::threshold;
                if (y.Fp > 0.0)
                    traj.blowup_time = t + 2.0 / (p - 1.0) * y.F / y.Fp;
                else
                    traj.blowup_time = t;
                break;
            }
            if (t >= horizon) {
                traj.terminated_reason = OdeTermination::horizon;
                break;
            }
        }
        const double factor = (err > 0.0) ? 0.9 * std::pow(err, -0.2) : 5.0;
        h *= std::clamp(factor, 0.2, 5.0);
    }
    return traj;
}

std::vector<OdeSweepEntry> ode_lifespan_sweep(double mu, double p,
                                              const CoefficientDescriptor& K,
                                              std::span<const double> eps_list,
                                              double f0, double f1, double t0,
                                              double threshold, double horizon,
                                              const OdeTolerances& tol) {
    if (eps_list.empty()) throw std::invalid_argument("ode_lifespan_sweep: empty epsilon list");
    std::vector<OdeSweepEntry> out;
    out.reserve(eps_list.size());
    for (double eps : eps_list) {
        OdeSweepEntry entry;
        entry.epsilon = eps;
        try {
            if (!(eps > 0.0)) throw std::invalid_argument("epsilon must be positive");
            const auto traj =
                integrate_kato(mu, p, K, eps * f0, eps * f1, t0, threshold, horizon, tol);
            if (traj.blowup_time)
                entry.blowup_time = traj.blowup_time;
            else
                entry.failure = ode_termination_label(traj.terminated_reason);
        } catch (const std::exception& e) {
            entry.failure = e.what();
        }
        out.push_back(std::move(entry));
    }
    return out;
}

}  // namespace cosmowave
