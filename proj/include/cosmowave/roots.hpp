#pragma once

#include <optional>

namespace cosmowave {

struct QuadraticRoots {
    int count = 0;          // 0, 1 (linear), or 2 (lo <= hi, possibly equal)
    double lo = 0.0;
    double hi = 0.0;
    double discriminant = 0.0;
};

// Real roots of a*x^2 + b*x + c. Uses the cancellation-free form
// q = -(b + sign(b)*sqrt(disc))/2 with roots q/a and c/q.
QuadraticRoots solve_quadratic(double a, double b, double c);

// Unique root of T^s * (ln T)^(-r) = target on the increasing branch
// T > exp(r/s), for s, r, target > 0. Empty when the target does not
// exceed the branch minimum. Solved by bisection in ln T; the returned
// root back-substitutes to a relative residual below ~1e-11.
std::optional<double> solve_power_log(double s, double r, double target);

}  // namespace cosmowave
