#include "viscograd/regularize.hpp"

#include "viscograd/error.hpp"
#include "viscograd/stencil.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace viscograd {

namespace detail {

// Shared with the serial reference so both paths round identically.
inline double quadratic_penalty(long sum_sq, double h, double eps) {
    return static_cast<double>(sum_sq) * (h * h) / (2.0 * eps);
}

} // namespace detail

namespace {

struct Candidate {
    Offset offset;
    long sum_sq;
};

void check_eps(double eps) {
    if (!(eps > 0.0) || !std::isfinite(eps)) fail(ErrorCode::NonPositiveEps, "eps must be positive");
}

// Integer offsets within the localisation ball, in increasing linear order so
// that scanning them visits candidate nodes by increasing index.
std::vector<Candidate> ball_offsets(const Grid& g, double radius) {
    const double reach = radius * (1.0 + 1e-9) / g.h();
    std::array<long, kMaxDim> r{0, 0, 0};
    for (int a = 0; a < g.dim(); ++a) r[a] = std::min(static_cast<long>(std::floor(reach)), g.nodes(a) - 1);
    const double reach_sq = reach * reach;
    std::vector<Candidate> out;
    for (long k = -r[2]; k <= r[2]; ++k)
        for (long j = -r[1]; j <= r[1]; ++j)
            for (long i = -r[0]; i <= r[0]; ++i) {
                const long s = i * i + j * j + k * k;
                if (static_cast<double>(s) <= reach_sq) out.push_back({{i, j, k}, s});
            }
    return out;  // loops already run slowest axis outermost, i.e. increasing linear delta
}

ConvolutionResult make_result(const GridFunction& u, double eps, double rho) {
    ConvolutionResult c;
    c.values = GridFunction(u.grid_ptr());
    c.values.set_boundary_pinned(false);
    c.argnode.assign(u.grid().size(), 0);
    c.gap.assign(u.grid().size(), 0.0);
    c.eps = eps;
    c.rho = rho;
    return c;
}

} // namespace

double localization_radius(const GridFunction& u, double eps) {
    check_eps(eps);
    return 2.0 * std::sqrt(u.max_abs() * eps);
}

ConvolutionResult sup_convolution(const GridFunction& u, double eps) {
    const double rho = localization_radius(u, eps);
    const Grid& g = u.grid();
    const auto offsets = ball_offsets(g, rho);
    std::vector<double> penalty(offsets.size());
    for (std::size_t k = 0; k < offsets.size(); ++k) penalty[k] = detail::quadratic_penalty(offsets[k].sum_sq, g.h(), eps);

    ConvolutionResult c = make_result(u, eps, rho);
    const auto region = g.region_nodes();
    const long count = static_cast<long>(region.size());

#pragma omp parallel for schedule(static)
    for (long r = 0; r < count; ++r) {
        const Index x = region[static_cast<std::size_t>(r)];
        const Offset ix = g.multi_index(x);
        double best = -std::numeric_limits<double>::infinity();
        double second = -std::numeric_limits<double>::infinity();
        Index arg = x;
        for (std::size_t k = 0; k < offsets.size(); ++k) {
            Offset iy{ix[0] + offsets[k].offset[0], ix[1] + offsets[k].offset[1], ix[2] + offsets[k].offset[2]};
            if (!g.in_lattice(iy)) continue;
            const Index y = g.linear_index(iy);
            if (!g.in_region(y)) continue;
            const double v = u[y] - penalty[k];
            if (v > best) {
                second = best;
                best = v;
                arg = y;
            } else if (v > second) {
                second = v;
            }
        }
        c.values[x] = best;
        c.argnode[x] = arg;
        c.gap[x] = best - second;
    }
    return c;
}

ConvolutionResult inf_convolution(const GridFunction& u, double eps) {
    ConvolutionResult c = sup_convolution(-u, eps);
    c.values = -c.values;
    c.kind = ConvolutionKind::Inf;
    return c;
}

double semiconvexity_defect(const ConvolutionResult& c) {
    const GridFunction field = c.kind == ConvolutionKind::Sup ? c.values : -c.values;
    const Grid& g = field.grid();
    double defect = std::numeric_limits<double>::infinity();
    bool any = false;
    for (Index node : g.interior_nodes()) {
        if (!has_full_stencil(g, node)) continue;
        any = true;
        defect = std::min(defect, hessian_central(field, node).min_eigenvalue() + 1.0 / c.eps);
    }
    if (!any) fail(ErrorCode::EmptyInterior, "no node with a full Hessian stencil");
    return defect;
}

double semiconvexity_tolerance(const GridFunction& u) {
    return 4.0 * sampled_lipschitz(u) * u.grid().h();
}

double MagicPropertyReport::fraction_within(double bound) const {
    if (residuals.empty()) return 1.0;
    const auto ok = std::count_if(residuals.begin(), residuals.end(), [&](double r) { return r <= bound; });
    return static_cast<double>(ok) / static_cast<double>(residuals.size());
}

MagicPropertyReport magic_property_check(const GridFunction& u, const ConvolutionResult& c, double tie_threshold) {
    const Grid& g = u.grid();
    if (!g.same_layout(c.values.grid()) || c.argnode.size() != g.size() || c.gap.size() != g.size())
        fail(ErrorCode::MismatchedInputs, "convolution result does not belong to this grid function");
    const double sign = c.kind == ConvolutionKind::Sup ? 1.0 : -1.0;

    MagicPropertyReport report;
    double sum = 0.0;
    for (Index node : g.interior_nodes()) {
        if (!has_full_stencil(g, node)) continue;
        if (c.gap[node] < tie_threshold) {
            ++report.excluded_ties;
            continue;
        }
        if (!g.is_interior(c.argnode[node])) {
            ++report.excluded_constrained;
            continue;
        }
        const Vec grad = gradient_central(c.values, node);
        const Point x = g.coord(node);
        const Point xe = c.argpoint(node);
        double r2 = 0.0;
        for (int a = 0; a < g.dim(); ++a) {
            const double d = xe[a] - (x[a] + sign * c.eps * grad(a));
            r2 += d * d;
        }
        const double r = std::sqrt(r2);
        report.residuals.push_back(r);
        report.max_residual = std::max(report.max_residual, r);
        sum += r;
        ++report.checked;
    }
    if (report.checked > 0) report.mean_residual = sum / static_cast<double>(report.checked);
    return report;
}

GridFunction lax_evolve(const GridFunction& u0, double t, LaxSign sign) {
    if (!(t > 0.0) || !std::isfinite(t)) fail(ErrorCode::NonPositiveT, "evolution time must be positive");
    return sign == LaxSign::Plus ? sup_convolution(u0, t).values : inf_convolution(u0, t).values;
}

double sampled_modulus(const GridFunction& u, double r) {
    const Grid& g = u.grid();
    const auto offsets = ball_offsets(g, r);
    double omega = 0.0;
    for (Index x : g.region_nodes()) {
        const Offset ix = g.multi_index(x);
        for (const auto& o : offsets) {
            Offset iy{ix[0] + o.offset[0], ix[1] + o.offset[1], ix[2] + o.offset[2]};
            if (!g.in_lattice(iy)) continue;
            const Index y = g.linear_index(iy);
            if (g.in_region(y)) omega = std::max(omega, std::abs(u[x] - u[y]));
        }
    }
    return omega;
}

namespace reference {

ConvolutionResult sup_convolution(const GridFunction& u, double eps) {
    check_eps(eps);
    const Grid& g = u.grid();
    ConvolutionResult c = make_result(u, eps, 2.0 * std::sqrt(u.max_abs() * eps));
    for (Index x : g.region_nodes()) {
        const Offset ix = g.multi_index(x);
        double best = -std::numeric_limits<double>::infinity();
        double second = -std::numeric_limits<double>::infinity();
        Index arg = x;
        for (Index y : g.region_nodes()) {
            const Offset iy = g.multi_index(y);
            long s = 0;
            for (int a = 0; a < kMaxDim; ++a) s += (iy[a] - ix[a]) * (iy[a] - ix[a]);
            const double v = u[y] - detail::quadratic_penalty(s, g.h(), eps);
            if (v > best) {
                second = best;
                best = v;
                arg = y;
            } else if (v > second) {
                second = v;
            }
        }
        c.values[x] = best;
        c.argnode[x] = arg;
        c.gap[x] = best - second;
    }
    return c;
}

} // namespace reference

} // namespace viscograd
