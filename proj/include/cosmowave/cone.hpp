#pragma once

#include <cmath>
#include <stdexcept>

namespace cosmowave {

// Propagation-cone expansion A(t) = integral_1^t s^(-alpha) ds for alpha >= 1:
// ln t when alpha = 1, (1 - t^(1-alpha))/(alpha - 1) when alpha > 1 (bounded by
// 1/(alpha-1) for all t).
inline double cone_expansion(double alpha, double t) {
    if (!(alpha >= 1.0)) throw std::domain_error("cone_expansion: requires alpha >= 1");
    if (!(t >= 1.0)) throw std::domain_error("cone_expansion: requires t >= 1");
    if (std::abs(alpha - 1.0) <= 1e-12) return std::log(t);
    return (1.0 - std::pow(t, 1.0 - alpha)) / (alpha - 1.0);
}

struct LightCone {
    double alpha = 1.0;
    double R = 1.0;

    double expansion(double t) const { return cone_expansion(alpha, t); }
    double radius(double t) const { return R + expansion(t); }
};

}  // namespace cosmowave
