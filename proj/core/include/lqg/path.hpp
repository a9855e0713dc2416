#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

namespace lqg {

enum class PathDim { scalar, planar };

// Time grid plus values; the shared container for BM / Bessel / Levy
// trajectories. Planar paths interleave (x,y) pairs, values.size() == 2n.
struct SampledPath {
    std::vector<double> times;
    std::vector<double> values;
    PathDim dim_tag = PathDim::scalar;

    std::size_t size() const { return times.size(); }

    double x(std::size_t i) const {
        return dim_tag == PathDim::planar ? values[2 * i] : values[i];
    }
    double y(std::size_t i) const { return values[2 * i + 1]; }

    void set_xy(std::size_t i, double vx, double vy) {
        values[2 * i] = vx;
        values[2 * i + 1] = vy;
    }

    static SampledPath make_scalar(std::size_t n) {
        SampledPath p;
        p.times.resize(n);
        p.values.resize(n);
        p.dim_tag = PathDim::scalar;
        return p;
    }
    static SampledPath make_planar(std::size_t n) {
        SampledPath p;
        p.times.resize(n);
        p.values.resize(2 * n, 0.0);
        p.dim_tag = PathDim::planar;
        return p;
    }

    // Columns: t,x[,y].
    void write_csv(std::ostream& os) const;

    // Throws std::invalid_argument on NaN/Inf values or a non-increasing
    // time grid.
    void validate() const;
};

}  // namespace lqg
