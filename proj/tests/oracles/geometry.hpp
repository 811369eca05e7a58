#pragma once

// Exhaustive geometric oracles.

#include "viscograd/grid.hpp"

#include <cmath>
#include <limits>

namespace oracle {

/// Euclidean distance from a node to the nearest boundary node, by scanning all of them.
inline double distance_to_boundary(const viscograd::Grid& g, viscograd::Index node) {
    const auto x = g.coord(node);
    double best = std::numeric_limits<double>::infinity();
    for (auto b : g.boundary_nodes()) {
        const auto y = g.coord(b);
        double s = 0.0;
        for (int a = 0; a < g.dim(); ++a) s += (x[a] - y[a]) * (x[a] - y[a]);
        best = std::min(best, std::sqrt(s));
    }
    return best;
}

} // namespace oracle
