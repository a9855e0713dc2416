#include "lqg/params.hpp"

#include <stdexcept>
#include <string>

namespace lqg {

GammaParams make_params(double gamma) {
    if (!(gamma > 0.0) || !(gamma < 2.0)) {
        throw std::domain_error("make_params: gamma must lie in (0,2), got " +
                                std::to_string(gamma));
    }
    GammaParams p;
    p.gamma = gamma;
    p.kappa = gamma * gamma;
    p.kappa_prime = 16.0 / p.kappa;
    p.q_charge = 2.0 / gamma + gamma / 2.0;
    p.bm_correlation = -std::cos(M_PI * p.kappa / 4.0);
    return p;
}

BesselDimensions bessel_dimensions(const GammaParams& p) {
    BesselDimensions d;
    d.sphere_dim = 4.0 - 8.0 / p.kappa;
    d.disk_dim = 3.0 - 4.0 / p.kappa;
    d.gamma = p.gamma;
    d.q_charge = p.q_charge;
    return d;
}

double area_factor(const GammaParams& p, double shift_c) {
    return std::exp(p.gamma * shift_c);
}

double boundary_factor(const GammaParams& p, double shift_c) {
    return std::exp(0.5 * p.gamma * shift_c);
}

double natural_time_factor(const GammaParams& p, double shift_c) {
    return std::exp(0.75 * p.gamma * shift_c);
}

double apply_scaling(const ScalingAction& action, ScaledQuantity tag,
                     double value, const GammaParams& p) {
    switch (tag) {
        case ScaledQuantity::area:
            return value * area_factor(p, action.shift_c);
        case ScaledQuantity::boundary:
            return value * boundary_factor(p, action.shift_c);
        case ScaledQuantity::natural_time: {
            const double g0 = gamma_sqrt83();
            if (std::abs(p.gamma - g0) > kNaturalTimeGammaTol * g0) {
                throw std::invalid_argument(
                    "apply_scaling: natural_time scaling requires gamma = "
                    "sqrt(8/3)");
            }
            return value * natural_time_factor(p, action.shift_c);
        }
    }
    throw std::logic_error("apply_scaling: unknown quantity tag");
}

}  // namespace lqg
