#pragma once

#include "viscograd/grid.hpp"

#include <vector>

namespace viscograd {

enum class ConvolutionKind { Sup, Inf };

/// Regularised values together with the optimising node of every region node.
struct ConvolutionResult {
    GridFunction values;
    /// Maximiser (sup) or minimiser (inf) node; lowest node index on ties.
    std::vector<Index> argnode;
    /// Best candidate minus runner-up; 0 on exact ties, +inf with a single candidate.
    std::vector<double> gap;
    double eps = 0.0;
    /// Search radius 2 sqrt(max|u| eps).
    double rho = 0.0;
    ConvolutionKind kind = ConvolutionKind::Sup;

    Point argpoint(Index node) const { return values.grid().coord(argnode[node]); }
};

/// 2 sqrt(max|u| eps): every optimiser lies within this distance.
double localization_radius(const GridFunction& u, double eps);

/// u^eps(x) = max over nodes y with |x - y| <= rho of u(y) - |x - y|^2 / (2 eps).
///
/// OpenMP over x. Candidates are scanned in increasing node index and only a
/// strictly better value replaces the incumbent, so ties resolve to the lowest
/// index whatever the schedule. Throws NonPositiveEps.
ConvolutionResult sup_convolution(const GridFunction& u, double eps);

/// u_eps = -(-u)^eps, bit for bit.
ConvolutionResult inf_convolution(const GridFunction& u, double eps);

/// min over full-stencil nodes of lambda_min(D^2 u^eps) + 1/eps. For an inf
/// result the semiconcavity analogue (applied to -u_eps) is returned.
/// Throws EmptyInterior when no node has a full stencil.
double semiconvexity_defect(const ConvolutionResult& c);

/// Allowed undershoot of semiconvexity_defect below zero: 4 Lip(u) h.
double semiconvexity_tolerance(const GridFunction& u);

struct MagicPropertyReport {
    double max_residual = 0.0;
    double mean_residual = 0.0;
    std::size_t checked = 0;
    std::size_t excluded_ties = 0;
    /// Optimiser on the region boundary, where the first-order condition fails.
    std::size_t excluded_constrained = 0;
    std::vector<double> residuals;

    double fraction_within(double bound) const;
};

/// Residual |x^eps - (x + eps D u^eps(x))| (x - eps D u_eps for inf) at
/// full-stencil nodes whose optimiser is unique (gap >= tie_threshold) and
/// lies strictly inside the region. Throws MismatchedInputs.
MagicPropertyReport magic_property_check(const GridFunction& u, const ConvolutionResult& c,
                                         double tie_threshold = 1e-12);

enum class LaxSign { Plus, Minus };

/// Hopf-Lax evolution: sup-convolution at time t for u_t = |Du|^2/2 (Plus),
/// inf-convolution for u_t = -|Du|^2/2 (Minus). Throws NonPositiveT.
GridFunction lax_evolve(const GridFunction& u0, double t, LaxSign sign);

/// Sampled modulus of continuity: max |u(x) - u(y)| over node pairs within r.
double sampled_modulus(const GridFunction& u, double r);

namespace reference {

/// Serial, untruncated sup-convolution over every region node.
ConvolutionResult sup_convolution(const GridFunction& u, double eps);

} // namespace reference

} // namespace viscograd
