#pragma once

#include "viscograd/grid.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace viscograd {

/// Dirichlet data b. Either a closed form, which also defines b on the strip
/// around the boundary that tug-of-war reads, or a sampled trace on the
/// boundary nodes of the solve grid, extended to the strip by the value of the
/// nearest boundary node.
class BoundaryData {
public:
    static BoundaryData from_function(std::function<double(const Point&)> f, std::string label = "function");
    static BoundaryData from_trace(GridFunction trace, std::string label = "file");

    bool closed_form() const noexcept { return static_cast<bool>(f_); }
    const std::string& label() const noexcept { return label_; }

    /// b at a region node of `grid` (which must match the trace grid, if any).
    double at(const Grid& grid, Index node) const;
    /// b at an arbitrary point of the strip.
    double strip_value(const Point& x) const;

    /// Boundary nodes set to b, interior nodes to the midrange of b; pinned.
    GridFunction initial_guess(const GridPtr& grid) const;
    /// Overwrites the boundary nodes of u with b.
    void apply(GridFunction& u) const;

private:
    std::function<double(const Point&)> f_;
    std::optional<GridFunction> trace_;
    std::string label_;
};

struct ContinuationSchedule {
    std::vector<double> m_values{4, 8, 16, 32, 64};
    double inner_tol = 1e-9;
    std::size_t max_inner_iters = 20000;

    /// Strictly increasing exponents, all > dim. Throws InvalidSchedule.
    void validate(int dim) const;
};

struct StageRecord {
    double m = 0.0;
    double energy = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    double gradient_norm = 0.0;
};

struct SolveReport {
    std::string method;
    GridFunction final;
    std::vector<StageRecord> stages;
    /// ||u_{m_{k+1}} - u_{m_k}||_inf between consecutive stages.
    std::vector<double> sup_norm_steps;
    double residual_linf = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    /// Tug-of-war: last sweep's max update and the data range read by the game.
    double last_update = 0.0;
    double data_min = 0.0;
    double data_max = 0.0;
    std::size_t max_principle_violations = 0;
    /// Continuation: max over stages of Lip(u_m) / Lip(b); flagged above 2.
    double lipschitz_ratio = 0.0;
    bool lipschitz_flag = false;
};

// -- m-Dirichlet energy ------------------------------------------------------

/// Sum over Kuhn simplices (n! per lattice cell, all corners in the region) of
/// |Du|^m times the simplex volume, Du the exact gradient of the piecewise
/// linear interpolant. Exact for affine u. Throws Overflow.
double m_energy(const GridFunction& u, double m);

/// E_m and dE_m/du at every node (zero at nodes in no simplex).
/// OpenMP over simplices, then a gather over nodes in fixed order.
double m_energy_gradient(const GridFunction& u, double m, std::span<double> grad);

struct MinimizeOptions {
    /// Stop when max_i |dJ/du_i| / h^n <= tol, J = E_m^(1/m).
    double tol = 1e-9;
    std::size_t max_iters = 20000;
    /// Check that every accepted step lowers E_m.
    bool assert_monotone = true;
};

struct MinimizeResult {
    GridFunction u;
    double energy = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    double gradient_norm = 0.0;
    /// Accepted steps that raised E_m by more than 1e-12 relative.
    std::size_t monotonicity_breaks = 0;
};

/// Minimises E_m over the free nodes with fixed boundary values b.
///
/// Damped Newton: the exact Hessian of E_m (PSD, assembled per simplex) plus a
/// small Laplacian term gives the direction, Armijo backtracking on E_m^(1/m)
/// the step. Falls back to steepest descent if the factorisation fails.
/// Returns the best iterate with converged = false on stagnation or when
/// max_iters is reached. Throws InvalidArgument when m <= n and Overflow when
/// E_m leaves the double range (rescale b to |b| <= 1).
MinimizeResult minimize_m_energy(const BoundaryData& b, double m, const GridFunction& init,
                                 const MinimizeOptions& options = {});

/// Minimises E_m for each m of the schedule, warm-starting every stage from
/// the previous one.
SolveReport solve_by_continuation(const GridPtr& grid, const BoundaryData& b,
                                  const ContinuationSchedule& schedule = {});

// -- tug-of-war --------------------------------------------------------------

struct TugOfWarOptions {
    /// Stop once the largest update is <= tol * max(1, |b|).
    double tol = 1e-15;
    std::size_t max_iters = 200000;
    /// Parallel Jacobi sweeps instead of in-place raster Gauss-Seidel.
    bool jacobi = false;
    std::optional<GridFunction> init;
};

/// Value iteration u <- (max + min)/2 over the sampled eps-sphere at every
/// interior node until the largest update is <= tol. Boundary nodes hold b;
/// points outside the region read the strip extension of b.
SolveReport solve_by_tug_of_war(const GridPtr& grid, const BoundaryData& b, double eps,
                                const TugOfWarOptions& options = {});

/// Distance to the nearest boundary node. Alternating-direction sweeps pass
/// each node's nearest boundary node on to its 3^n - 1 neighbours, which keep
/// it when it is closer than their own; repeated until nothing changes. Exact
/// except in rare configurations where the true nearest node never reaches x
/// through a chain of neighbours that share it.
GridFunction distance_to_boundary(const GridPtr& grid);

namespace reference {

/// Serial scatter form of m_energy_gradient.
double m_energy_gradient(const GridFunction& u, double m, std::span<double> grad);

} // namespace reference

} // namespace viscograd
