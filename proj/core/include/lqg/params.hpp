#pragma once

#include <cmath>

namespace lqg {

// Coupled coupling constants for a gamma in (0,2):
//   kappa = gamma^2, kappa' = 16/gamma^2, Q = 2/gamma + gamma/2,
//   rho = -cos(pi gamma^2 / 4)  (increment correlation of the boundary
//   length pair (L,R)).
// Immutable after construction; derived fields are precomputed once.
struct GammaParams {
    double gamma;
    double kappa;
    double kappa_prime;
    double q_charge;
    double bm_correlation;
};

// Bessel dimensions attached to a GammaParams:
//   sphere_dim = 4 - 8/gamma^2   (sphere H1 driver excursions)
//   disk_dim   = 3 - 4/gamma^2   (disk H1 driver excursions)
//   cone_dim(a) = 2 + (4/gamma)(Q - a), > 2 whenever a < Q.
struct BesselDimensions {
    double sphere_dim;
    double disk_dim;
    double gamma;
    double q_charge;

    double cone_dim(double alpha_weight) const {
        return 2.0 + (4.0 / gamma) * (q_charge - alpha_weight);
    }
};

// Adding the constant C to the field scales
//   area           by e^{gamma C}
//   boundary       by e^{gamma C / 2}
//   natural time   by e^{3 gamma C / 4}   (gamma = sqrt(8/3) only)
struct ScalingAction {
    double shift_c = 0.0;
};

enum class ScaledQuantity { area, boundary, natural_time };

// sqrt(8/3), the flagship coupling (kappa' = 6).
inline double gamma_sqrt83() { return std::sqrt(8.0 / 3.0); }

// Relative tolerance for the "gamma == sqrt(8/3)" gate on natural-time
// scaling. Structural restriction, not a numerical one.
inline constexpr double kNaturalTimeGammaTol = 1e-12;

GammaParams make_params(double gamma);
BesselDimensions bessel_dimensions(const GammaParams& p);

double area_factor(const GammaParams& p, double shift_c);
double boundary_factor(const GammaParams& p, double shift_c);
double natural_time_factor(const GammaParams& p, double shift_c);

double apply_scaling(const ScalingAction& action, ScaledQuantity tag,
                     double value, const GammaParams& p);

}  // namespace lqg
