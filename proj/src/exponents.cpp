#include "cosmowave/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cosmowave/roots.hpp"

namespace cosmowave {

namespace {

bool near(double x, double y) {
    return std::abs(x - y) <= 1e-12 * std::max({1.0, std::abs(x), std::abs(y)});
}

void check(bool ok, const char* msg) {
    if (!ok) throw std::domain_error(msg);
}

std::optional<double> largest_positive_root(const QuadraticRoots& r) {
    if (r.count == 0) return std::nullopt;
    const double best = r.hi;
    if (best > 0.0) return best;
    return std::nullopt;
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

}  // namespace

void ModelParams::validate() const {
    if (n < 2) throw std::invalid_argument("ModelParams: n must be an integer >= 2");
    if (!(alpha >= 0.0)) throw std::invalid_argument("ModelParams: alpha must be >= 0");
    if (!(mu >= 0.0)) throw std::invalid_argument("ModelParams: mu must be >= 0");
    if (!(p > 1.0)) throw std::invalid_argument("ModelParams: p must be > 1");
    if (!(epsilon >= 0.0)) throw std::invalid_argument("ModelParams: epsilon must be >= 0");
    if (!(R > 0.0)) throw std::invalid_argument("ModelParams: R must be > 0");
}

void FLRWParams::validate(bool allow_w_above_one) const {
    if (n < 2) throw std::invalid_argument("FLRWParams: n must be an integer >= 2");
    if (!(w > -1.0)) throw std::invalid_argument("FLRWParams: w must exceed -1");
    if (!allow_w_above_one && w > 1.0)
        throw std::invalid_argument("FLRWParams: w > 1 requires the allow-w-above-one override");
}

ModelParams FLRWParams::to_model(double p, double epsilon, double R) const {
    validate(true);
    ModelParams m;
    m.n = n;
    m.alpha = alpha();
    m.mu = mu();
    m.p = p;
    m.epsilon = epsilon;
    m.R = R;
    m.validate();
    return m;
}

double gamma_strauss(int n, double p) {
    check(n >= 2, "gamma_strauss: n must be >= 2");
    return -(n - 1.0) * p * p + (n + 1.0) * p + 2.0;
}

double gamma_damped(int n, double p, double alpha, double mu) {
    check(n >= 2, "gamma_damped: n must be >= 2");
    check(alpha < 1.0, "gamma_damped: requires alpha < 1");
    const double s = 1.0 - alpha;
    return -p * p * (n - 1.0 + (mu - alpha) / s) + p * (n + 1.0 + (mu + 3.0 * alpha) / s) + 2.0;
}

double gamma_flrw(int n, double p, double w) {
    check(n >= 2, "gamma_flrw: n must be >= 2");
    check(w > -1.0, "gamma_flrw: requires w > -1");
    const double k = 4.0 / (n * (1.0 + w));
    return -(n - 1.0) * p * p + (n + 1.0 + k) * p + 2.0 - k;
}

double fujita_exponent(double d) {
    check(d > 0.0, "fujita_exponent: dimension must be positive");
    return 1.0 + 2.0 / d;
}

double strauss_exponent(int n) {
    check(n >= 2, "strauss_exponent: n must be >= 2");
    const auto roots = solve_quadratic(-(n - 1.0), n + 1.0, 2.0);
    return *largest_positive_root(roots);
}

double critical_exponent(int n, double alpha, double mu) {
    check(n >= 2, "critical_exponent: n must be >= 2");
    check(alpha < 1.0, "critical_exponent: requires alpha < 1");
    const double s = 1.0 - alpha;
    const double lead = n - 1.0 + (mu - alpha) / s;
    check(lead > 0.0, "critical_exponent: degenerate quadratic (leading coefficient <= 0)");
    const auto roots =
        solve_quadratic(-lead, n + 1.0 + (mu + 3.0 * alpha) / s, 2.0);
    return *largest_positive_root(roots);
}

double critical_exponent_flrw(int n, double w) {
    check(n >= 2, "critical_exponent_flrw: n must be >= 2");
    check(w > -1.0, "critical_exponent_flrw: requires w > -1");
    const double k = 4.0 / (n * (1.0 + w));
    const auto roots = solve_quadratic(-(n - 1.0), n + 1.0 + k, 2.0 - k);
    const auto root = largest_positive_root(roots);
    check(root.has_value(), "critical_exponent_flrw: no positive root");
    return *root;
}

WStarResult w_star(int n) {
    check(n >= 2, "w_star: n must be >= 2");
    const double nn = n;
    const double a = nn * (nn * nn + nn + 2.0);
    const double b = 2.0 * nn * (nn - 1.0) * (nn - 1.0);
    const double c = nn * nn * nn - 5.0 * nn * nn + 8.0 * nn - 8.0;
    const auto roots = solve_quadratic(a, b, c);
    WStarResult out;
    out.discriminant = roots.discriminant;
    if (roots.count == 0) return out;
    out.value = roots.hi;
    out.near_degenerate = std::sqrt(std::max(roots.discriminant, 0.0)) < 0.5 * std::abs(b);
    return out;
}

const char* regime_label(Regime r) {
    switch (r) {
        case Regime::accelerated: return "A_accelerated";
        case Regime::wavelike: return "B_wavelike";
        case Regime::heatlike: return "C_heatlike";
        case Regime::no_blowup_proved: return "no_blowup_proved";
    }
    return "?";
}

RegimeReport classify_regime(int n, double w, double p, bool allow_w_above_one) {
    FLRWParams flrw{n, w};
    flrw.validate(allow_w_above_one);
    check(p > 1.0, "classify_regime: p must be > 1");

    RegimeReport rep;
    rep.exponents.gamma_strauss = gamma_strauss(n, p);
    rep.exponents.gamma_flrw = gamma_flrw(n, p, w);
    rep.exponents.p_crit = critical_exponent_flrw(n, w);
    rep.exponents.w_star = w_star(n).value;
    const double d = n - 2.0 / (1.0 + w);
    if (d > 0.0) rep.exponents.p_fujita_eff = fujita_exponent(d);

    const double w_accel = 2.0 / n - 1.0;
    if (w <= w_accel || near(w, w_accel)) {
        rep.regime = Regime::accelerated;
        if (near(w, w_accel)) {
            // uniformly accelerated case: alpha = 1
            rep.bound = "T^2 * (ln T)^(-n(p-1)) <= C * eps^(-(p-1))";
        } else {
            rep.bound = "T <= C * eps^(-(p-1)/2)";
            rep.eps_exponent = -(p - 1.0) / 2.0;
        }
        return rep;
    }

    // Decelerated expansion: d > 0 is automatic here.
    const double pF = *rep.exponents.p_fujita_eff;
    const double pc = rep.exponents.p_crit;

    if (near(p, pF)) {
        rep.regime = Regime::heatlike;
        rep.critical = true;
        rep.bound = "T <= exp(C * eps^(-(p-1)))";
        return rep;
    }
    if (near(p, pc) && pc > pF && !near(pc, pF)) {
        rep.regime = Regime::wavelike;
        rep.critical = true;
        rep.bound = "T <= exp(C * eps^(-p(p-1)))";
        return rep;
    }

    const bool heat_ok = p < pF;
    const bool wave_ok = p < pc && !near(p, pc);
    const double heat_exp = heat_ok ? -(p - 1.0) / (2.0 - d * (p - 1.0)) : 0.0;
    const double wave_exp = wave_ok ? -2.0 * p * (p - 1.0) / rep.exponents.gamma_flrw : 0.0;

    if (heat_ok && wave_ok) {
        if (near(heat_exp, wave_exp)) {
            rep.regime = Regime::heatlike;
            rep.critical = true;  // exponent tie: B/C boundary curve
            rep.eps_exponent = heat_exp;
            rep.bound = "T <= C * eps^(-(p-1)/(2-d(p-1))), d = n - 2/(1+w)";
        } else if (heat_exp > wave_exp) {
            rep.regime = Regime::heatlike;
            rep.eps_exponent = heat_exp;
            rep.bound = "T <= C * eps^(-(p-1)/(2-d(p-1))), d = n - 2/(1+w)";
        } else {
            rep.regime = Regime::wavelike;
            rep.eps_exponent = wave_exp;
            rep.bound = "T <= C * eps^(-2p(p-1)/gamma0)";
        }
    } else if (heat_ok) {
        rep.regime = Regime::heatlike;
        rep.eps_exponent = heat_exp;
        rep.bound = "T <= C * eps^(-(p-1)/(2-d(p-1))), d = n - 2/(1+w)";
    } else if (wave_ok) {
        rep.regime = Regime::wavelike;
        rep.eps_exponent = wave_exp;
        rep.bound = "T <= C * eps^(-2p(p-1)/gamma0)";
    } else {
        rep.regime = Regime::no_blowup_proved;
        rep.bound = "no blow-up bound proved at these parameters";
    }
    return rep;
}

LifespanBound lifespan_bound(const ModelParams& prm, double normalization) {
    prm.validate();
    if (!(normalization > 0.0))
        throw std::invalid_argument("lifespan_bound: normalization must be > 0");
    if (!(prm.epsilon > 0.0) || !(prm.epsilon <= 1.0))
        throw std::invalid_argument("lifespan_bound: epsilon must lie in (0, 1]");

    const double C = normalization;
    const double eps = prm.epsilon;
    const double p = prm.p;
    const int n = prm.n;
    LifespanBound out;

    if (near(prm.alpha, 1.0)) {
        const double r = n * (p - 1.0);
        const double target = C * std::pow(eps, -(p - 1.0));
        const auto T = solve_power_log(2.0, r, target);
        out.kind = BoundKind::log_corrected;
        out.formula = "T solves T^2 * (ln T)^(-n(p-1)) = C * eps^(-(p-1))";
        if (T) {
            out.applies = true;
            out.value = *T;
        } else {
            out.note = "no root above the monotone-branch minimum (epsilon too large at this normalization)";
        }
        return out;
    }

    if (prm.alpha > 1.0) {
        out.applies = true;
        out.kind = BoundKind::polynomial;
        out.eps_exponent = -(p - 1.0) / 2.0;
        out.value = C * std::pow(eps, *out.eps_exponent);
        out.formula = "T <= C * eps^(-(p-1)/2)";
        return out;
    }

    // alpha < 1: take the minimum over the applicable proven bounds.
    struct Candidate {
        double value;
        BoundKind kind;
        std::optional<double> exponent;
        bool critical;
        std::string formula;
    };
    std::optional<Candidate> best;
    auto offer = [&](Candidate c) {
        if (!best || c.value < best->value) best = std::move(c);
    };

    const double d_heat = n * (1.0 - prm.alpha);
    const double pF = fujita_exponent(d_heat);

    if (near(p, pF)) {
        offer({std::exp(C * std::pow(eps, -(p - 1.0))), BoundKind::exponential,
               std::nullopt, true, "T <= exp(C * eps^(-(p-1)))"});
    } else if (p < pF) {
        const double denom = 2.0 - d_heat * (p - 1.0);
        if (denom > 0.0) {  // otherwise the bound is inapplicable
            const double e = -(p - 1.0) / denom;
            offer({C * std::pow(eps, e), BoundKind::polynomial, e, false,
                   "T <= C * eps^(-(p-1)/(2-n(1-alpha)(p-1)))"});
        }
    }

    bool have_pc = true;
    double pc = 0.0;
    try {
        pc = critical_exponent(n, prm.alpha, prm.mu);
    } catch (const std::domain_error&) {
        have_pc = false;  // degenerate quadratic: gamma-bound family unavailable
    }
    if (have_pc) {
        if (near(p, pc)) {
            if (pc > pF && !near(pc, pF)) {
                offer({std::exp(C * std::pow(eps, -p * (p - 1.0))), BoundKind::exponential,
                       std::nullopt, true, "T <= exp(C * eps^(-p(p-1)))"});
            }
        } else if (p < pc) {
            const double g = gamma_damped(n, p, prm.alpha, prm.mu);
            const double e = -2.0 * p * (p - 1.0) / ((1.0 - prm.alpha) * g);
            offer({C * std::pow(eps, e), BoundKind::polynomial, e, false,
                   "T <= C * eps^(-2p(p-1)/((1-alpha)*gamma))"});
        }
    }

    if (!best) {
        out.note = "no bound applies: p = " + fmt(p) +
                   " exceeds every proven blow-up range at these parameters";
        return out;
    }
    out.applies = true;
    out.value = best->value;
    out.kind = best->kind;
    out.eps_exponent = best->exponent;
    out.critical = best->critical;
    out.formula = best->formula;
    return out;
}

}  // namespace cosmowave
