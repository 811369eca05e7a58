#pragma once

#include "viscograd/grid.hpp"
#include "viscograd/jet.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace viscograd {

/// Second-order central gradient at an interior node. Exact on quadratics.
Vec gradient_central(const GridFunction& u, Index node);

/// Central Hessian at an interior node: second differences on the diagonal and
/// the four-point cross (u(++) - u(+-) - u(-+) + u(--)) / 4h^2 off it.
SymMatrix hessian_central(const GridFunction& u, Index node);

/// True when hessian_central can be evaluated at `node`.
bool has_full_stencil(const Grid& grid, Index node) noexcept;

/// Fixed direction set sampled on spheres: the 2n axis directions
/// (+e0, -e0, +e1, -e1, ...) followed by the 2^n normalised diagonals in
/// binary sign order (bit a set means a negative component on axis a). In one
/// dimension the diagonals coincide with the axes and are dropped.
std::vector<Point> sphere_directions(int dim);

struct BallExtrema {
    double max;
    double min;
    int argmax_dir;  ///< index into sphere_directions; first direction wins ties
    int argmin_dir;
};

/// Precomputed multilinear interpolation weights for the points x + eps d,
/// d in sphere_directions(dim). Offsets are translation invariant, so one
/// stencil serves every node of a grid.
class BallStencil {
public:
    BallStencil(const Grid& grid, double eps);

    /// All interpolation corners of every direction lie in the region.
    bool fits(Index node) const noexcept;
    double value(std::span<const double> values, Index node, int dir) const noexcept;
    BallExtrema extrema(std::span<const double> values, Index node) const noexcept;

    std::size_t directions() const noexcept { return dirs_.size(); }
    double eps() const noexcept { return eps_; }

    /// Calls f(corner_node) for every corner read at `node` (node must fit).
    template <class F>
    void for_each_corner(Index node, F&& f) const {
        for (const auto& dir : dirs_)
            for (const auto& c : dir.corners) f(static_cast<Index>(static_cast<std::ptrdiff_t>(node) + c.delta));
    }

private:
    struct Corner {
        std::ptrdiff_t delta;
        Offset offset;
        double weight;
    };
    struct Direction {
        std::vector<Corner> corners;
    };

    const Grid* grid_;
    double eps_;
    std::vector<Direction> dirs_;
};

/// Max and min of u over the sampled sphere of radius eps around `node`.
/// Throws BallExitsDomain when an interpolation cell leaves the region and
/// InvalidArgument when eps < h.
BallExtrema ball_extrema(const GridFunction& u, Index node, double eps);

/// Multilinear interpolation of u at an arbitrary point of the lattice box.
double interpolate(const GridFunction& u, const Point& x);

} // namespace viscograd
