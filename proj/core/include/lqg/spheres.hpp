#pragma once

#include <optional>
#include <vector>

#include "lqg/field.hpp"
#include "lqg/params.hpp"
#include "lqg/rng.hpp"
#include "lqg/stable.hpp"

namespace lqg {

// Marked points of a sphere sample are the two cylinder ends, symbolic.
enum class SphereProvenance { bessel, bottleneck };

struct SphereSample {
    CylinderField field;     // unit-area representative (exact shift applied)
    double area = 1.0;       // post-shift
    double raw_area = 0.0;   // area at acceptance, pre-shift
    SphereProvenance provenance = SphereProvenance::bessel;
    long long attempts = 0;
};

struct SphereBesselConfig {
    double min_max = 0.15;       // excursion sup truncation (beta^{-1/2})
    double t_lo = 5e-3;          // lifetime proposal window
    double t_hi = 60.0;
    int excursion_steps = 1 << 13;
    SphereFieldConfig field;
    double epsilon_cells = 2.5;  // regularization radius in cell units
    double epsilon_abs = 0.0;    // when > 0, fixed radius overriding the above
    double area_lo = 0.25;
    double area_hi = 25.0;
    // Lateral-free area screen: skip materializing fields whose H1-only
    // area is outside the window by more than the slack factor.
    double screen_factor = 0.455;
    double screen_slack = 2.4;
    long long max_attempts = 10'000'000;
    bool unit_shift = true;
};

SphereSample sample_sphere_bessel(const GammaParams& params,
                                  const SphereBesselConfig& cfg, Rng& rng);

struct SphereBottleneckConfig {
    double r = -4.9;            // bottleneck level (well below 0)
    double epsilon = 0.05;      // accepted area window [1, 1+epsilon]
    double profile_dv = 1.0 / 64.0;
    SphereFieldConfig field;
    double epsilon_cells = 2.5;
    double epsilon_abs = 0.0;  // when > 0, fixed radius overriding the above
    double screen_slack = 2.2;    // stage-1 h1-only area screen width
    double screen_factor = 0.455; // empirical full/h1 area ratio midpoint
    long long max_attempts = 40'000'000;
    bool unit_shift = true;
};

// Quantum-cone route: H1 right of the first passage of level r is
// r + (BM - (Q - gamma) v); conditioned on climbing back to r/2
// (the beta = e^{gamma r / 2} device) and on area in [1, 1+epsilon].
SphereSample sample_sphere_bottleneck(const GammaParams& params,
                                      const SphereBottleneckConfig& cfg,
                                      Rng& rng);

enum class DiskConstraint { unit_area, unit_boundary, boundary_length };

struct DiskConfig {
    DiskConstraint constraint = DiskConstraint::unit_boundary;
    double boundary_length = 1.0;  // target for DiskConstraint::boundary_length
    double min_max = 0.15;
    double t_lo = 5e-3;
    double t_hi = 30.0;
    int excursion_steps = 1 << 11;
    int n_x = 128;
    int n_theta = 32;
    int n_modes = 12;
    double height_floor_mult = 10.0;
    double epsilon_cells = 2.5;
    long long max_attempts = 1'000'000;
};

struct DiskSample {
    CylinderField field;  // strip geometry
    double boundary_length = 0.0;
    double area = 0.0;
    double marked_boundary_point = 0.0;  // position along the boundary mass
    long long attempts = 0;
};

// Strip field from a dimension (3 - 4/gamma^2) Bessel excursion at
// quadratic variation 2du plus the Neumann lateral part; the constraint is
// enforced by the exact e^{gamma C/2} boundary shift.
DiskSample sample_quantum_disk(const GammaParams& params, const DiskConfig& cfg,
                               Rng& rng);

// Empirical area-given-unit-boundary law: a bank of materialized disks,
// resampled for jumps that are not materialized (areas scale by L^2).
class DiskAreaBank {
  public:
    DiskAreaBank(const GammaParams& params, const DiskConfig& cfg, int n_disks,
                 std::uint64_t seed, int threads = 1);
    double draw(Rng& rng) const;
    double mean() const { return mean_; }
    const std::vector<double>& samples() const { return areas_; }

  private:
    std::vector<double> areas_;
    double mean_ = 0.0;
};

enum class DiskMaterialize { none, top_k, all_above };

struct LevySphereConfig {
    StableTruncation excursion_truncation = StableTruncation::by_height(0.1, 0.02, 20.0);
    int excursion_steps = 1 << 9;
    double jump_threshold_mult = 10.0;
    DiskMaterialize materialize = DiskMaterialize::none;
    int top_k = 0;
    double all_above = 0.0;
    DiskConfig disk;
    bool small_jump_completion = true;
};

struct DiskDecoration {
    double time = 0.0;
    double boundary_length = 0.0;
    bool clockwise = false;
    double marked_point = 0.0;  // uniform position on the disk boundary
    double area = 0.0;
    bool materialized = false;
    std::optional<DiskSample> disk;
};

struct LevySphereSample {
    StableExcursion excursion;
    std::vector<DiskDecoration> decorations;
    double total_area = 0.0;
    double small_jump_area = 0.0;  // analytic sub-threshold completion
};

// gamma = sqrt(8/3) only: 3/2-stable excursion whose jumps carry oriented,
// marked quantum disks with boundary length equal to the jump size.
LevySphereSample assemble_levy_sphere(const GammaParams& params,
                                      const LevySphereConfig& cfg,
                                      const StableModel& model,
                                      const DiskAreaBank& bank, Rng& rng);

// Area weight A^{-7/2 + k} of the k-marked sphere family.
double sphere_marked_point_exponent(int k);
double sphere_marked_point_weight(int k, double area);

// Shift-invariant cross-validation observable: unit-shifted theta-averaged
// profile at the quartiles of the area marginal in x.
struct ProfileObservable {
    double at_q25 = 0.0;
    double at_q50 = 0.0;
    double at_q75 = 0.0;
};
ProfileObservable sphere_profile_observable(const CylinderField& field,
                                            const QuantumMeasureGrid& measure);

}  // namespace lqg
