#pragma once

#include <cstddef>
#include <vector>

#include "lqg/path.hpp"

namespace lqg {

enum class ConeOrientation { left, right };

// Maximal grid interval [start,end] on which both coordinates stay >= their
// values at start, closed when one coordinate first returns to its start
// level. terminal_displacement is the other coordinate's gap at closure;
// the closing coordinate's gap is 0 within grid_tolerance.
struct ConeExcursionRecord {
    std::size_t start_index = 0;
    std::size_t end_index = 0;
    double base_x = 0.0;
    double base_y = 0.0;
    ConeOrientation orientation = ConeOrientation::left;
    double terminal_displacement = 0.0;
    double grid_tolerance = 0.0;
};

// All cone excursions of a planar path with terminal displacement in
// [min_terminal, max_terminal]. Detection is grid-level; the reported
// tolerance is twice the per-step increment scale.
std::vector<ConeExcursionRecord> find_cone_excursions(const SampledPath& path,
                                                      double min_terminal,
                                                      double max_terminal);

}  // namespace lqg
