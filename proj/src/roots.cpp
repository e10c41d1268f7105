#include "cosmowave/roots.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cosmowave {

QuadraticRoots solve_quadratic(double a, double b, double c) {
    QuadraticRoots out;
    if (a == 0.0) {
        if (b == 0.0) return out;  // constant, no roots reported
        out.count = 1;
        out.lo = out.hi = -c / b;
        return out;
    }
    const double disc = b * b - 4.0 * a * c;
    out.discriminant = disc;
    if (disc < 0.0) return out;
    const double s = std::sqrt(disc);
    const double q = (b >= 0.0) ? -0.5 * (b + s) : -0.5 * (b - s);
    double r0, r1;
    if (q != 0.0) {
        r0 = q / a;
        r1 = c / q;
    } else {
        r0 = r1 = 0.0;  // b == 0 and c == 0
    }
    out.count = 2;
    out.lo = std::min(r0, r1);
    out.hi = std::max(r0, r1);
    return out;
}

std::optional<double> solve_power_log(double s, double r, double target) {
    if (!(s > 0.0) || !(r > 0.0) || !(target > 0.0))
        throw std::domain_error("solve_power_log: requires s, r, target > 0");

    // Work on L = ln T: g(L) = s*L - r*ln(L), increasing for L > r/s.
    const double knee = r / s;
    const double goal = std::log(target);
    auto g = [&](double L) { return s * L - r * std::log(L); };
    if (!(goal > g(knee))) return std::nullopt;

    double lo = knee;
    double hi = std::max(2.0 * knee, knee + 1.0);
    while (g(hi) < goal) {
        hi *= 2.0;
        if (!std::isfinite(hi)) return std::nullopt;
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) < goal)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-14 * std::max(1.0, hi)) break;
    }
    return std::exp(0.5 * (lo + hi));
}

}  // namespace cosmowave
