#pragma once

#include "viscograd/grid.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace viscograd {

/// Nodewise residual with its max-norm. Nodes that were not evaluated hold 0
/// and have evaluated[node] == 0.
struct ResidualField {
    GridFunction field;
    std::vector<std::uint8_t> evaluated;
    double max_abs = 0.0;
    std::size_t count = 0;
    /// Nodes dropped by an exclusion mask or kink detection.
    std::size_t excluded = 0;
};

/// Du (x) Du : D^2u from the central stencils at every full-stencil node not
/// flagged in `exclude` (empty span: nothing excluded). Throws EmptyInterior.
ResidualField infinity_residual(const GridFunction& u, std::span<const std::uint8_t> exclude = {});

/// |Du|^2 - 1 from central gradients at interior nodes. A node whose second
/// difference along some axis exceeds 1/h in magnitude is a kink; it and its
/// axis neighbours are excluded. Throws EmptyInterior.
ResidualField eikonal_residual(const GridFunction& u);

struct ConeCase {
    Point vertex{};
    double slope = 0.0;
    std::size_t subdomain = 0;
    /// Positive excess beyond the tolerance.
    double excess = 0.0;
    bool min_side = false;
};

struct ConeCheckReport {
    std::size_t cones_tested = 0;
    std::size_t subdomains = 0;
    /// Largest excess of interior max(u - C) over boundary max(u - C), and of
    /// boundary min(u - C) over interior min(u - C), before tolerance.
    double worst_violation = 0.0;
    std::vector<ConeCase> failing_cases;

    bool passed() const noexcept { return failing_cases.empty(); }
};

/// Tolerance constant C_v in C_v h (1 + |L|), calibrated on affine data.
inline constexpr double kConeToleranceConstant = 1.0;

/// Comparison with cones C(z) = L |z - vertex| on sampled boxes of the grid.
///
/// Box 0 is the whole lattice; the rest are random index boxes with at least
/// three nodes per axis, intersected with the region. Vertices are uniform in
/// the grid bounds enlarged by half their size on every side, rejected when
/// they fall in the closed box; slopes are +-10^U(-1, 1). A box node is
/// interior when its axis neighbours are in the box. Both
///   max_int (u - C) <= max_bdry (u - C) and min_int (u - C) >= min_bdry (u - C)
/// are checked with tolerance C_v h (1 + |L|). Parallel over cones.
ConeCheckReport cone_comparison_check(const GridFunction& u, std::size_t n_cones = 64, std::size_t n_subdomains = 16,
                                      std::uint64_t seed = 0, double tol_constant = kConeToleranceConstant);

struct PenalizationStep {
    double alpha = 0.0;
    /// max over node pairs of u(x) - v(y) - alpha |x - y|^2 / 2
    double M = 0.0;
    /// alpha |x_a - y_a|^2 / 2 at the maximiser
    double alpha_psi = 0.0;
    Index x = 0;
    Index y = 0;
};

struct PenalizationReport {
    std::vector<PenalizationStep> steps;
    /// M at the largest alpha.
    double limit_estimate = 0.0;
    /// max over nodes of u - v.
    double direct_max = 0.0;
    /// osc of u(x) - v(y) over pairs: (max u - min v) - (min u - max v).
    double oscillation = 0.0;
};

/// Doubling-of-variables diagnostic. For each alpha the pair search is
/// restricted to |x - y| <= sqrt(2 (max u - min v - max(u - v)) / alpha), which
/// contains every maximiser. Ties resolve to the lowest (x, y). Parallel over x.
/// Throws GridMismatch, InvalidArgument (alphas not positive and increasing).
PenalizationReport penalization_diagnostic(const GridFunction& u, const GridFunction& v,
                                           std::span<const double> alphas);

struct AronssonSample {
    GridFunction values;
    /// Nodes with x = 0 or y = 0.
    std::vector<Index> axis_nodes;
    /// 1 where the central Hessian stencil touches an axis node.
    std::vector<std::uint8_t> exclude;
};

/// |x|^(4/3) - |y|^(4/3) at every region node. Throws Not2D.
AronssonSample aronsson_sample(const GridPtr& grid);

namespace reference {

/// Exhaustive serial pair search.
PenalizationReport penalization_diagnostic(const GridFunction& u, const GridFunction& v,
                                           std::span<const double> alphas);

/// Serial cone check with the same sampling.
ConeCheckReport cone_comparison_check(const GridFunction& u, std::size_t n_cones, std::size_t n_subdomains,
                                      std::uint64_t seed, double tol_constant = kConeToleranceConstant);

} // namespace reference

} // namespace viscograd
