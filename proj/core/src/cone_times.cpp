#include "lqg/cone_times.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lqg {

std::vector<ConeExcursionRecord> find_cone_excursions(const SampledPath& path,
                                                      double min_terminal,
                                                      double max_terminal) {
    if (path.dim_tag != PathDim::planar)
        throw std::invalid_argument("find_cone_excursions: planar path required");
    const std::size_t n = path.size();
    std::vector<ConeExcursionRecord> out;
    if (n < 3) return out;

    // Increment scale sets the closure tolerance: a true cone time sits
    // between grid points, so the closing coordinate can miss its start
    // level by about one increment.
    double mean_abs_inc = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        mean_abs_inc += std::abs(path.x(i) - path.x(i - 1)) +
                        std::abs(path.y(i) - path.y(i - 1));
    }
    mean_abs_inc /= static_cast<double>(2 * (n - 1));
    const double tol = 2.0 * mean_abs_inc;

    for (std::size_t s = 0; s + 1 < n; ++s) {
        const double bx = path.x(s);
        const double by = path.y(s);
        // Scan while strictly above the base; the first return to (or
        // crossing of) a base level closes the excursion.
        std::size_t j = s + 1;
        while (j < n && path.x(j) > bx && path.y(j) > by) ++j;
        if (j == n) continue;  // never closes inside the window
        if (j == s + 1) continue;  // dies immediately, no interval
        // Coordinate that returned decides the orientation (left when the
        // first coordinate closes); the other one's gap at closure is the
        // terminal displacement.
        const double dx = path.x(j) - bx;
        const double dy = path.y(j) - by;
        const bool x_closed = dx < dy;
        const double disp = x_closed ? std::max(dy, 0.0) : std::max(dx, 0.0);
        if (disp < min_terminal || disp > max_terminal) continue;
        ConeExcursionRecord rec;
        rec.start_index = s;
        rec.end_index = j;
        rec.base_x = bx;
        rec.base_y = by;
        rec.orientation =
            x_closed ? ConeOrientation::left : ConeOrientation::right;
        rec.terminal_displacement = disp;
        rec.grid_tolerance = tol;
        out.push_back(rec);
    }
    return out;
}

}  // namespace lqg
