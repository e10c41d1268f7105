#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace cosmowave {

// Coefficient tuple for u_tt - t^(-2*alpha) Lap u + (mu/t) u_t = |u|^p
// with data u(1) = eps*u0, u_t(1) = eps*u1 supported in {|x| <= R}.
struct ModelParams {
    int n = 3;           // spatial dimension, >= 2
    double alpha = 1.0;  // expansion exponent, >= 0
    double mu = 0.0;     // damping coefficient, >= 0
    double p = 2.0;      // nonlinearity power, > 1
    double epsilon = 1.0;// data amplitude, > 0
    double R = 1.0;      // initial support radius, > 0

    void validate() const;  // throws std::invalid_argument naming the violated bound
};

// Cosmological parameters (n, w) and the derived damped-wave dictionary.
struct FLRWParams {
    int n = 3;
    double w = 0.0;  // equation-of-state parameter, > -1

    double alpha() const { return 2.0 / (n * (1.0 + w)); }
    double mu() const { return 2.0 / (1.0 + w); }
    bool accelerated() const { return w <= 2.0 / n - 1.0; }

    // Operations accept -1 < w <= 1 by default; pass allow_w_above_one to lift the cap.
    void validate(bool allow_w_above_one = false) const;

    ModelParams to_model(double p, double epsilon, double R) const;
};

// Quadratic whose positive root is the Strauss exponent: -(n-1)p^2 + (n+1)p + 2.
double gamma_strauss(int n, double p);

// Damped-wave generalization, defined for alpha < 1:
// -p^2 (n-1 + (mu-alpha)/(1-alpha)) + p (n+1 + (mu+3 alpha)/(1-alpha)) + 2.
double gamma_damped(int n, double p, double alpha, double mu);

// FLRW form: -(n-1)p^2 + (n+1 + 4/(n(1+w)))p + 2 - 4/(n(1+w)), for w > -1.
double gamma_flrw(int n, double p, double w);

double fujita_exponent(double d);            // 1 + 2/d, d > 0
double strauss_exponent(int n);              // positive root of gamma_strauss
double critical_exponent(int n, double alpha, double mu);  // positive root of gamma_damped
double critical_exponent_flrw(int n, double w);            // positive root of gamma_flrw

// Larger root of n(n^2+n+2) w^2 + 2n(n-1)^2 w + n^3 - 5n^2 + 8n - 8 = 0,
// the (w, p) point where the Fujita and critical-exponent curves cross.
struct WStarResult {
    std::optional<double> value;   // empty when the discriminant is negative
    bool near_degenerate = false;  // sqrt(disc) < |b|/2: roots nearly coincide
    double discriminant = 0.0;
};
WStarResult w_star(int n);

enum class Regime {
    accelerated,      // -1 < w <= 2/n - 1: blow-up for every p > 1
    wavelike,         // gamma-driven bound is the stronger one
    heatlike,         // Fujita-driven bound is the stronger one
    no_blowup_proved,
};
const char* regime_label(Regime r);  // "A_accelerated", "B_wavelike", ...

struct RegimeExponents {
    std::optional<double> p_fujita_eff;  // p_F(n - 2/(1+w)) when the reduced dimension is positive
    double p_crit = 0.0;                 // critical_exponent_flrw(n, w)
    std::optional<double> w_star;
    double gamma_flrw = 0.0;             // evaluated at the input p
    double gamma_strauss = 0.0;
};

struct RegimeReport {
    Regime regime = Regime::no_blowup_proved;
    std::string bound;                  // formula of the governing lifespan bound
    std::optional<double> eps_exponent; // epsilon power when the bound is polynomial
    bool critical = false;              // p sits on a critical curve (exponential bound or exponent tie)
    RegimeExponents exponents;
};

// Labels the (w, p) point. A bound T <= C eps^e with e < 0 is considered
// stronger when |e| is smaller; ties and critical equalities carry the
// `critical` flag and exponential bounds.
RegimeReport classify_regime(int n, double w, double p, bool allow_w_above_one = false);

enum class BoundKind { polynomial, exponential, log_corrected };

struct LifespanBound {
    bool applies = false;   // false: no proven bound at these parameters (see note)
    double value = 0.0;     // bound on T evaluated at (epsilon, C)
    BoundKind kind = BoundKind::polynomial;
    std::optional<double> eps_exponent;  // for polynomial bounds
    bool critical = false;
    std::string formula;
    std::string note;
};

// Evaluates the sharpest proven lifespan upper bound at the given
// normalization constant. For alpha > 1 this is C eps^{-(p-1)/2}; for
// alpha = 1 the unique root T of T^2 (ln T)^{-n(p-1)} = C eps^{-(p-1)}
// above the monotone-branch knee; for alpha < 1 the minimum over the
// applicable polynomial/exponential bounds, each gated by its p-range.
LifespanBound lifespan_bound(const ModelParams& params, double normalization);

}  // namespace cosmowave
