#include "lqg/field.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace lqg {

namespace {

constexpr int kCirclePoints = 64;

}  // namespace

double CylinderField::interp(double x, double theta) const {
    const double span = theta_span();
    if (geometry == Geometry::cylinder) {
        theta = std::fmod(theta, span);
        if (theta < 0) theta += span;
    } else {
        // Neumann reflection on the strip sides.
        theta = std::fmod(theta, 2.0 * span);
        if (theta < 0) theta += 2.0 * span;
        if (theta > span) theta = 2.0 * span - theta;
    }
    // Cell-centered grid; clamp x to the window interior.
    double u = (x - x_min) / dx() - 0.5;
    u = std::min(std::max(u, 0.0), static_cast<double>(n_x - 1));
    double v = theta / dtheta() - 0.5;
    int i0 = static_cast<int>(u);
    i0 = std::min(i0, n_x - 2);
    const double wu = u - i0;
    int j0;
    double wv;
    if (geometry == Geometry::cylinder) {
        // periodic in theta
        double vv = v;
        if (vv < 0) vv += n_theta;
        j0 = static_cast<int>(vv) % n_theta;
        wv = vv - std::floor(vv);
    } else {
        double vv = std::min(std::max(v, 0.0), static_cast<double>(n_theta - 1));
        j0 = std::min(static_cast<int>(vv), n_theta - 2);
        wv = vv - j0;
    }
    const int j1 = geometry == Geometry::cylinder ? (j0 + 1) % n_theta
                                                  : std::min(j0 + 1, n_theta - 1);
    const double f00 = at(i0, j0), f01 = at(i0, j1);
    const double f10 = at(i0 + 1, j0), f11 = at(i0 + 1, j1);
    return (1 - wu) * ((1 - wv) * f00 + wv * f01) +
           wu * ((1 - wv) * f10 + wv * f11);
}

void CylinderField::rebuild_total() {
    total.assign(static_cast<std::size_t>(n_x) * n_theta, 0.0);
    const bool cyl = geometry == Geometry::cylinder;
    for (int i = 0; i < n_x; ++i) {
        for (int j = 0; j < n_theta; ++j) {
            double v = h1_profile.empty() ? 0.0 : h1_profile[i];
            const double th = cell_theta(j);
            for (int n = 1; n <= n_modes; ++n) {
                const double c = mode_cos[(n - 1) * n_x + i];
                v += c * std::cos(n * th);
                if (cyl) {
                    const double s = mode_sin[(n - 1) * n_x + i];
                    v += s * std::sin(n * th);
                }
            }
            total[i * n_theta + j] = v;
        }
    }
}

void CylinderField::add_constant(double c) {
    for (double& v : total) v += c;
    for (double& v : h1_profile) v += c;
}

void CylinderField::save_binary(std::ostream& os) const {
    const char magic[8] = {'L', 'Q', 'G', 'F', 'L', 'D', '0', '1'};
    os.write(magic, 8);
    const std::int32_t geo = geometry == Geometry::cylinder ? 0 : 1;
    const std::int32_t dims[4] = {static_cast<std::int32_t>(n_x),
                                  static_cast<std::int32_t>(n_theta),
                                  static_cast<std::int32_t>(n_modes), geo};
    os.write(reinterpret_cast<const char*>(dims), sizeof dims);
    const double win[2] = {x_min, x_max};
    os.write(reinterpret_cast<const char*>(win), sizeof win);
    auto dump = [&](const std::vector<double>& v) {
        const std::uint64_t n = v.size();
        os.write(reinterpret_cast<const char*>(&n), sizeof n);
        os.write(reinterpret_cast<const char*>(v.data()),
                 static_cast<std::streamsize>(n * sizeof(double)));
    };
    dump(h1_profile);
    dump(mode_cos);
    dump(mode_sin);
    dump(total);
}

CylinderField CylinderField::load_binary(std::istream& is) {
    char magic[8];
    is.read(magic, 8);
    if (std::memcmp(magic, "LQGFLD01", 8) != 0)
        throw std::runtime_error("CylinderField::load_binary: bad magic");
    std::int32_t dims[4];
    is.read(reinterpret_cast<char*>(dims), sizeof dims);
    double win[2];
    is.read(reinterpret_cast<char*>(win), sizeof win);
    CylinderField f;
    f.n_x = dims[0];
    f.n_theta = dims[1];
    f.n_modes = dims[2];
    f.geometry = dims[3] == 0 ? Geometry::cylinder : Geometry::strip;
    f.x_min = win[0];
    f.x_max = win[1];
    auto slurp = [&](std::vector<double>* v) {
        std::uint64_t n;
        is.read(reinterpret_cast<char*>(&n), sizeof n);
        v->resize(n);
        is.read(reinterpret_cast<char*>(v->data()),
                static_cast<std::streamsize>(n * sizeof(double)));
    };
    slurp(&f.h1_profile);
    slurp(&f.mode_cos);
    slurp(&f.mode_sin);
    slurp(&f.total);
    if (!is) throw std::runtime_error("CylinderField::load_binary: truncated");
    return f;
}

namespace {

// Stationary Gauss-Markov recursion for one lateral mode: variance 1/(2n),
// x-correlation e^{-n dx} per cell.
void fill_mode(std::vector<double>* out, int n_x, int mode_n, double dx,
               Rng& rng) {
    const double var = 1.0 / (2.0 * mode_n);
    const double phi = std::exp(-mode_n * dx);
    const double innov = std::sqrt(var * (1.0 - phi * phi));
    double a = std::sqrt(var) * rng.normal();
    (*out)[0] = a;
    for (int i = 1; i < n_x; ++i) {
        a = phi * a + innov * rng.normal();
        (*out)[i] = a;
    }
}

CylinderField sample_h2_impl(Geometry geo, double x_min, double x_max, int n_x,
                             int n_theta, int n_modes, Rng& rng) {
    if (n_modes < 1 || n_x < 2 || n_theta < 2 || !(x_max > x_min))
        throw std::invalid_argument("sample_h2: bad grid");
    CylinderField f;
    f.geometry = geo;
    f.x_min = x_min;
    f.x_max = x_max;
    f.n_x = n_x;
    f.n_theta = n_theta;
    f.n_modes = n_modes;
    f.h1_profile.assign(n_x, 0.0);
    f.mode_cos.assign(static_cast<std::size_t>(n_modes) * n_x, 0.0);
    if (geo == Geometry::cylinder)
        f.mode_sin.assign(static_cast<std::size_t>(n_modes) * n_x, 0.0);
    std::vector<double> buf(n_x);
    for (int n = 1; n <= n_modes; ++n) {
        fill_mode(&buf, n_x, n, f.dx(), rng);
        std::copy(buf.begin(), buf.end(), f.mode_cos.begin() + (n - 1) * n_x);
        if (geo == Geometry::cylinder) {
            fill_mode(&buf, n_x, n, f.dx(), rng);
            std::copy(buf.begin(), buf.end(), f.mode_sin.begin() + (n - 1) * n_x);
        }
    }
    f.rebuild_total();
    return f;
}

}  // namespace

CylinderField sample_h2_cylinder(double x_min, double x_max, int n_x,
                                 int n_theta, int n_modes, Rng& rng) {
    return sample_h2_impl(Geometry::cylinder, x_min, x_max, n_x, n_theta,
                          n_modes, rng);
}

CylinderField sample_h2_strip(double x_min, double x_max, int n_x, int n_theta,
                              int n_modes, Rng& rng) {
    return sample_h2_impl(Geometry::strip, x_min, x_max, n_x, n_theta, n_modes,
                          rng);
}

std::vector<double> h1_profile_from_excursion(const GammaParams& params,
                                              const BesselExcursion& excursion,
                                              const SphereFieldConfig& cfg,
                                              double qv_rate,
                                              double* x_span_out) {
    // Keep the window where log Z >= -floor/2 (field >= -floor/gamma);
    // accumulate the quadratic-variation clock of X = (2/gamma) log Z
    // there, at qv_rate per unit x.
    const double log_floor = -0.5 * cfg.height_floor_mult;
    const double field_of_log = 2.0 / params.gamma;
    const auto& v = excursion.path.values;
    const std::size_t n = v.size();
    std::vector<double> clock;   // x coordinate at kept grid points
    std::vector<double> logz;
    clock.reserve(n);
    logz.reserve(n);
    double u = 0.0;
    double prev_log = 0.0;
    bool have_prev = false;
    for (std::size_t i = 0; i < n; ++i) {
        if (!(v[i] > 0.0)) {
            have_prev = false;
            continue;
        }
        const double lz = std::log(v[i]);
        if (lz < log_floor) {
            have_prev = false;
            continue;
        }
        if (have_prev) {
            const double d = field_of_log * (lz - prev_log);
            u += d * d / qv_rate;
        }
        clock.push_back(u);
        logz.push_back(lz);
        prev_log = lz;
        have_prev = true;
    }
    if (clock.size() < 8 || !(u > 0.0))
        throw std::domain_error(
            "assemble_sphere_field: excursion too short above the height floor");
    if (x_span_out) *x_span_out = u;

    // Resample onto the uniform x grid by inverting the clock.
    std::vector<double> h1(cfg.n_x);
    const double dx = u / cfg.n_x;
    std::size_t k = 0;
    for (int i = 0; i < cfg.n_x; ++i) {
        const double x = (i + 0.5) * dx;
        while (k + 1 < clock.size() && clock[k + 1] < x) ++k;
        const std::size_t k1 = std::min(k + 1, clock.size() - 1);
        const double c0 = clock[k], c1 = clock[k1];
        const double w = c1 > c0 ? (x - c0) / (c1 - c0) : 0.0;
        const double lz = logz[k] * (1.0 - w) + logz[k1] * std::min(w, 1.0);
        h1[i] = field_of_log * lz;
    }
    return h1;
}

CylinderField assemble_sphere_field(const GammaParams& params,
                                    const BesselExcursion& excursion,
                                    const CylinderField& h2,
                                    const SphereFieldConfig& cfg) {
    if (h2.n_x != cfg.n_x || h2.n_theta != cfg.n_theta)
        throw std::invalid_argument("assemble_sphere_field: h2 grid mismatch");
    double span = 0.0;
    std::vector<double> h1 = sphere_h1_profile(params, excursion, cfg, &span);
    CylinderField f = h2;
    f.x_min = 0.0;
    f.x_max = span;
    f.h1_profile = std::move(h1);
    f.rebuild_total();
    return f;
}

double QuantumMeasureGrid::total() const {
    double s = 0.0;
    for (double m : cell_mass) s += m;
    return s;
}

QuantumMeasureGrid compute_area_measure(const CylinderField& field,
                                        double epsilon_reg,
                                        const GammaParams& params) {
    const double cell = std::max(field.dx(), field.dtheta());
    if (epsilon_reg < 2.0 * cell)
        throw std::domain_error(
            "compute_area_measure: epsilon must span at least 2 grid cells");
    QuantumMeasureGrid g;
    g.x_min = field.x_min;
    g.x_max = field.x_max;
    g.n_x = field.n_x;
    g.n_theta = field.n_theta;
    g.epsilon_reg = epsilon_reg;
    g.gamma = params.gamma;
    g.cell_mass.assign(static_cast<std::size_t>(field.n_x) * field.n_theta, 0.0);

    double cs[kCirclePoints], sn[kCirclePoints];
    for (int k = 0; k < kCirclePoints; ++k) {
        cs[k] = std::cos(2.0 * M_PI * k / kCirclePoints);
        sn[k] = std::sin(2.0 * M_PI * k / kCirclePoints);
    }
    const double pref =
        std::pow(epsilon_reg, 0.5 * params.kappa) * field.dx() * field.dtheta();
    for (int i = 0; i < field.n_x; ++i) {
        const double x = field.cell_x(i);
        for (int j = 0; j < field.n_theta; ++j) {
            const double th = field.cell_theta(j);
            double avg = 0.0;
            for (int k = 0; k < kCirclePoints; ++k)
                avg += field.interp(x + epsilon_reg * cs[k],
                                    th + epsilon_reg * sn[k]);
            avg /= kCirclePoints;
            g.cell_mass[i * field.n_theta + j] =
                pref * std::exp(params.gamma * avg);
        }
    }
    return g;
}

double BoundaryMeasure::total() const {
    double s = 0.0;
    for (double m : edge_mass) s += m;
    return s;
}

BoundaryMeasure compute_boundary_measure(const CylinderField& field,
                                         double epsilon_reg,
                                         const GammaParams& params) {
    if (field.geometry != Geometry::strip)
        throw std::invalid_argument(
            "compute_boundary_measure: strip geometry required");
    const double cell = std::max(field.dx(), field.dtheta());
    if (epsilon_reg < 2.0 * cell)
        throw std::domain_error(
            "compute_boundary_measure: epsilon must span at least 2 grid cells");
    BoundaryMeasure b;
    b.epsilon_reg = epsilon_reg;
    b.edge_mass.assign(static_cast<std::size_t>(2) * field.n_x, 0.0);
    double cs[kCirclePoints], sn[kCirclePoints];
    for (int k = 0; k < kCirclePoints; ++k) {
        cs[k] = std::cos(2.0 * M_PI * k / kCirclePoints);
        sn[k] = std::sin(2.0 * M_PI * k / kCirclePoints);
    }
    const double pref =
        std::pow(epsilon_reg, 0.25 * params.kappa) * field.dx();
    for (int e = 0; e < 2; ++e) {
        const double edge_theta = e == 0 ? 0.0 : field.theta_span();
        for (int i = 0; i < field.n_x; ++i) {
            const double x = field.cell_x(i);
            double avg = 0.0;
            // Reflected interpolation makes the full circle equal to the
            // semicircle average of the even extension.
            for (int k = 0; k < kCirclePoints; ++k)
                avg += field.interp(x + epsilon_reg * cs[k],
                                    edge_theta + epsilon_reg * sn[k]);
            avg /= kCirclePoints;
            b.edge_mass[e * field.n_x + i] =
                pref * std::exp(0.5 * params.gamma * avg);
        }
    }
    return b;
}

CylinderMap CylinderMap::identity() { return CylinderMap{}; }

CylinderMap CylinderMap::translation(double c) {
    CylinderMap m;
    m.kind = Kind::translation;
    m.parameter = {c, 0.0};
    return m;
}

CylinderMap CylinderMap::psi(std::complex<double> z) {
    CylinderMap m;
    m.kind = Kind::psi_z;
    m.parameter = z;
    return m;
}

CylinderMap CylinderMap::hull_shift(std::complex<double> z_anchor) {
    CylinderMap m;
    m.kind = Kind::hull_shift;
    m.parameter = z_anchor;
    return m;
}

std::complex<double> CylinderMap::apply(std::complex<double> w) const {
    switch (kind) {
        case Kind::identity:
            return w;
        case Kind::translation:
            return w + parameter;
        case Kind::psi_z:
            return -std::log(std::exp(-w) - std::exp(-parameter));
        case Kind::hull_shift:
            return std::log(std::exp(w) - std::exp(parameter));
    }
    return w;
}

std::complex<double> CylinderMap::inverse(std::complex<double> v) const {
    switch (kind) {
        case Kind::identity:
            return v;
        case Kind::translation:
            return v - parameter;
        case Kind::psi_z:
            return -std::log(std::exp(-v) + std::exp(-parameter));
        case Kind::hull_shift:
            return std::log(std::exp(v) + std::exp(parameter));
    }
    return v;
}

std::complex<double> CylinderMap::derivative(std::complex<double> w) const {
    switch (kind) {
        case Kind::identity:
        case Kind::translation:
            return {1.0, 0.0};
        case Kind::psi_z:
            return std::exp(-w) / (std::exp(-w) - std::exp(-parameter));
        case Kind::hull_shift:
            return std::exp(w) / (std::exp(w) - std::exp(parameter));
    }
    return {1.0, 0.0};
}

CoordinateChangeReport coordinate_change_check(const CylinderField& h_tilde,
                                               const CylinderMap& map,
                                               double a_lo, double a_hi,
                                               const double epsilon_reg,
                                               const GammaParams& params) {
    if (!(a_hi > a_lo))
        throw std::invalid_argument("coordinate_change_check: bad region");
    // The pulled-back field lives on h_tilde's own grid (the region snaps
    // to whole cells), so the identity map is bit-for-bit exact and grid
    // translations shift cells without resampling error.
    CylinderField h = h_tilde;
    const double cell = std::max(h.dx(), h.dtheta());
    for (int i = 0; i < h.n_x; ++i) {
        for (int j = 0; j < h.n_theta; ++j) {
            const std::complex<double> w{h.cell_x(i), h.cell_theta(j)};
            const std::complex<double> v = map.apply(w);
            if (map.kind == CylinderMap::Kind::identity) continue;
            const double dlog = std::log(std::abs(map.derivative(w)));
            h.total[i * h.n_theta + j] =
                std::isfinite(v.real()) && std::isfinite(dlog)
                    ? h_tilde.interp(v.real(), v.imag()) +
                          params.q_charge * dlog
                    : 0.0;
        }
    }
    h.h1_profile.assign(h.n_x, 0.0);

    // Region cells and their distance to the map singularity.
    const int i_lo = static_cast<int>(std::ceil((a_lo - h.x_min) / h.dx() - 0.5));
    const int i_hi = static_cast<int>(std::floor((a_hi - h.x_min) / h.dx() - 0.5));
    if (i_lo < 0 || i_hi >= h.n_x || i_hi < i_lo)
        throw std::invalid_argument(
            "coordinate_change_check: region outside the field window");
    if (map.kind == CylinderMap::Kind::psi_z) {
        const double guard = 2.0 * epsilon_reg + 2.0 * cell;
        for (int i = i_lo; i <= i_hi; ++i) {
            double dth = std::abs(h.cell_theta(0) - map.parameter.imag());
            (void)dth;
            const double dxs = std::abs(h.cell_x(i) - map.parameter.real());
            if (dxs < guard)
                throw std::domain_error(
                    "coordinate_change_check: region touches the map "
                    "singularity");
        }
    }

    const QuantumMeasureGrid gd = compute_area_measure(h, epsilon_reg, params);
    const QuantumMeasureGrid gt =
        compute_area_measure(h_tilde, epsilon_reg, params);

    CoordinateChangeReport rep;
    for (int i = i_lo; i <= i_hi; ++i)
        for (int j = 0; j < h.n_theta; ++j)
            rep.mass_pullback += gd.cell_mass[i * h.n_theta + j];

    // Image-side mass: h_tilde cells whose preimage center lies in A.
    const double x_lo_snap = h.x_min + i_lo * h.dx();
    const double x_hi_snap = h.x_min + (i_hi + 1) * h.dx();
    for (int i = 0; i < h_tilde.n_x; ++i) {
        for (int j = 0; j < h_tilde.n_theta; ++j) {
            const std::complex<double> v{h_tilde.cell_x(i),
                                         h_tilde.cell_theta(j)};
            const std::complex<double> w = map.inverse(v);
            if (w.real() >= x_lo_snap && w.real() < x_hi_snap)
                rep.mass_image += gt.cell_mass[i * h_tilde.n_theta + j];
        }
    }
    rep.rel_discrepancy = std::abs(rep.mass_pullback - rep.mass_image) /
                          std::max(rep.mass_image, 1e-300);
    return rep;
}

std::vector<DistortionRow> distortion_bound_check(
    std::complex<double> z_anchor,
    const std::vector<std::complex<double>>& probes) {
    const CylinderMap f = CylinderMap::hull_shift(z_anchor);
    std::vector<DistortionRow> rows(probes.size());
    for (std::size_t i = 0; i < probes.size(); ++i) {
        rows[i].w = probes[i];
        rows[i].displacement = std::abs(f.apply(probes[i]) - probes[i]);
    }
    // Fit K on the nearest third (sorted by Re w), check everywhere.
    std::vector<std::size_t> order(probes.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return probes[a].real() < probes[b].real();
    });
    double K = 0.0;
    const std::size_t fit_n = std::max<std::size_t>(1, probes.size() / 3);
    for (std::size_t r = 0; r < fit_n; ++r) {
        const std::size_t i = order[r];
        K = std::max(K,
                     rows[i].displacement * std::exp(probes[i].real()));
    }
    for (auto& row : rows) row.bound = K * std::exp(-row.w.real());
    return rows;
}

double dirichlet_inner(const CylinderField& f, const CylinderField& g) {
    if (f.n_x != g.n_x || f.n_theta != g.n_theta)
        throw std::invalid_argument("dirichlet_inner: grid mismatch");
    const double dx = f.dx(), dth = f.dtheta();
    double acc = 0.0;
    const bool cyl = f.geometry == Geometry::cylinder;
    for (int i = 0; i + 1 < f.n_x; ++i) {
        for (int j = 0; j < f.n_theta; ++j) {
            const int jn = cyl ? (j + 1) % f.n_theta : std::min(j + 1, f.n_theta - 1);
            const double fx = (f.at(i + 1, j) - f.at(i, j)) / dx;
            const double gx = (g.at(i + 1, j) - g.at(i, j)) / dx;
            const double ft = (f.at(i, jn) - f.at(i, j)) / dth;
            const double gt = (g.at(i, jn) - g.at(i, j)) / dth;
            acc += (fx * gx + ft * gt) * dx * dth;
        }
    }
    return acc / (2.0 * M_PI);
}

}  // namespace lqg
