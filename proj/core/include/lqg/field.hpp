#pragma once

#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

#include "lqg/bessel.hpp"
#include "lqg/params.hpp"
#include "lqg/rng.hpp"

namespace lqg {

enum class Geometry { cylinder, strip };

// Discretized field on a finite window of the cylinder R x [0,2pi) (ends
// identified) or the strip R x [0,pi] (Neumann sides). Decomposed as
//   total = h1_profile (constant in theta) + lateral modes,
// the modes being independent stationary Gauss-Markov processes in x with
// covariance e^{-n|x-x'|} / (2n) per cosine/sine coefficient. The theta
// mean of (total - h1) vanishes identically.
struct CylinderField {
    Geometry geometry = Geometry::cylinder;
    double x_min = 0.0, x_max = 1.0;
    int n_x = 0, n_theta = 0, n_modes = 0;
    std::vector<double> h1_profile;            // n_x
    std::vector<double> mode_cos;              // n_modes * n_x
    std::vector<double> mode_sin;              // cylinder only
    std::vector<double> total;                 // n_x * n_theta

    double theta_span() const {
        return geometry == Geometry::cylinder ? 2.0 * M_PI : M_PI;
    }
    double dx() const { return (x_max - x_min) / n_x; }
    double dtheta() const { return theta_span() / n_theta; }
    double cell_x(int i) const { return x_min + (i + 0.5) * dx(); }
    double cell_theta(int j) const { return (j + 0.5) * dtheta(); }
    double at(int i, int j) const { return total[i * n_theta + j]; }

    // Bilinear interpolation; theta wraps (cylinder) or reflects (strip),
    // x clamps at the window edges.
    double interp(double x, double theta) const;

    void rebuild_total();
    void add_constant(double c);

    void save_binary(std::ostream& os) const;
    static CylinderField load_binary(std::istream& is);
};

// Lateral (mean-zero-on-lines) part only; h1 is left at zero.
CylinderField sample_h2_cylinder(double x_min, double x_max, int n_x,
                                 int n_theta, int n_modes, Rng& rng);
// Strip variant: cosine modes only.
CylinderField sample_h2_strip(double x_min, double x_max, int n_x, int n_theta,
                              int n_modes, Rng& rng);

struct SphereFieldConfig {
    int n_x = 192;
    int n_theta = 48;
    int n_modes = 16;
    double height_floor_mult = 10.0;  // keep where (gamma/2) h1 >= -floor/..: log Z >= -floor/2
};

// H1 from a Bessel excursion: X = (2/gamma) log Z reparameterized so that
// d<X> = qv_rate * du (1 on the cylinder, 2 on the strip), truncated where
// log Z drops below the height floor; H2 must share the grid (its window
// is repositioned, which is legal by stationarity).
CylinderField assemble_sphere_field(const GammaParams& params,
                                    const BesselExcursion& excursion,
                                    const CylinderField& h2,
                                    const SphereFieldConfig& cfg);

// H1 profile alone (no lateral part), same reparameterization; used for
// cheap pre-screening and profile observables.
std::vector<double> h1_profile_from_excursion(const GammaParams& params,
                                              const BesselExcursion& excursion,
                                              const SphereFieldConfig& cfg,
                                              double qv_rate,
                                              double* x_span_out);

inline std::vector<double> sphere_h1_profile(const GammaParams& params,
                                             const BesselExcursion& excursion,
                                             const SphereFieldConfig& cfg,
                                             double* x_span_out) {
    return h1_profile_from_excursion(params, excursion, cfg, 1.0, x_span_out);
}

struct QuantumMeasureGrid {
    double x_min = 0.0, x_max = 0.0;
    int n_x = 0, n_theta = 0;
    std::vector<double> cell_mass;
    double epsilon_reg = 0.0;
    double gamma = 0.0;

    double total() const;
};

// eps^{gamma^2/2} e^{gamma h_eps} per cell, h_eps the 64-point circle
// average in the flat cylinder metric. epsilon must span >= 2 grid cells.
QuantumMeasureGrid compute_area_measure(const CylinderField& field,
                                        double epsilon_reg,
                                        const GammaParams& params);

struct BoundaryMeasure {
    std::vector<double> edge_mass;  // strip: bottom edge cells then top
    double epsilon_reg = 0.0;

    double total() const;
};

// eps^{gamma^2/4} e^{(gamma/2) h_eps} per boundary cell on the two strip
// edges (the half-exponent boundary regularization matching the
// e^{gamma C/2} shift rule).
BoundaryMeasure compute_boundary_measure(const CylinderField& field,
                                         double epsilon_reg,
                                         const GammaParams& params);

// Conformal self-maps of the cylinder used by the coordinate-change and
// distortion checks; w = x + i theta.
struct CylinderMap {
    enum class Kind { identity, translation, psi_z, hull_shift } kind =
        Kind::identity;
    std::complex<double> parameter{0.0, 0.0};

    static CylinderMap identity();
    static CylinderMap translation(double c);
    // psi_z(w) = -log(e^{-w} - e^{-z}), sends z to +infinity.
    static CylinderMap psi(std::complex<double> z);
    // F(w) = log(e^w - e^{z_a}), normalized at +infinity (|F(w)-w| -> 0).
    static CylinderMap hull_shift(std::complex<double> z_anchor);

    std::complex<double> apply(std::complex<double> w) const;
    std::complex<double> inverse(std::complex<double> v) const;
    std::complex<double> derivative(std::complex<double> w) const;
};

struct CoordinateChangeReport {
    double mass_pullback = 0.0;   // mu_h(A), h = h_tilde o phi + Q log|phi'|
    double mass_image = 0.0;      // mu_h_tilde(phi(A))
    double rel_discrepancy = 0.0;
};

// Checks mu_h(A) = mu_{h_tilde}(phi(A)) for A = [a_lo, a_hi] x full circle
// on the domain side. Throws if A comes within two cells of a singularity
// of the map.
CoordinateChangeReport coordinate_change_check(const CylinderField& h_tilde,
                                               const CylinderMap& map,
                                               double a_lo, double a_hi,
                                               double epsilon_reg,
                                               const GammaParams& params);

struct DistortionRow {
    std::complex<double> w;
    double displacement = 0.0;
    double bound = 0.0;  // fitted K * exp(-Re w)
};

// Displacement |F(w) - w| of the hull-removal map anchored at z_anchor,
// tabulated against the exponential bound; the constant K is fitted on
// the nearest third of the probes and must dominate the rest.
std::vector<DistortionRow> distortion_bound_check(
    std::complex<double> z_anchor, const std::vector<std::complex<double>>& probes);

// Discrete Dirichlet pairing (1/2pi) Int grad f . grad g over the window.
double dirichlet_inner(const CylinderField& f, const CylinderField& g);

}  // namespace lqg
