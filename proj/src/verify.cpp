#include "viscograd/verify.hpp"

#include "viscograd/error.hpp"
#include "viscograd/stencil.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace viscograd {

ResidualField infinity_residual(const GridFunction& u, std::span<const std::uint8_t> exclude) {
    const Grid& g = u.grid();
    if (!exclude.empty() && exclude.size() != g.size())
        fail(ErrorCode::MismatchedInputs, "exclusion mask does not match the grid");
    ResidualField r{GridFunction(u.grid_ptr()), std::vector<std::uint8_t>(g.size(), 0)};
    for (Index node : g.interior_nodes()) {
        if (!has_full_stencil(g, node)) continue;
        if (!exclude.empty() && exclude[node]) {
            ++r.excluded;
            continue;
        }
        const Vec p = gradient_central(u, node);
        const double value = hessian_central(u, node).contract(p);
        r.field[node] = value;
        r.evaluated[node] = 1;
        r.max_abs = std::max(r.max_abs, std::abs(value));
        ++r.count;
    }
    if (r.count == 0) fail(ErrorCode::EmptyInterior, "no node to evaluate the residual at");
    return r;
}

ResidualField eikonal_residual(const GridFunction& u) {
    const Grid& g = u.grid();
    ResidualField r{GridFunction(u.grid_ptr()), std::vector<std::uint8_t>(g.size(), 0)};
    std::vector<std::uint8_t> kink(g.size(), 0);
    const double threshold = 1.0 / g.h();
    for (Index node : g.interior_nodes()) {
        bool spike = false;
        for (int a = 0; a < g.dim() && !spike; ++a) {
            Offset d{0, 0, 0};
            d[a] = 1;
            const Index up = *g.shift(node, d);
            d[a] = -1;
            const Index down = *g.shift(node, d);
            spike = std::abs(u[up] - 2.0 * u[node] + u[down]) / (g.h() * g.h()) > threshold;
        }
        if (!spike) continue;
        kink[node] = 1;
        for (int a = 0; a < g.dim(); ++a)
            for (long s : {-1L, 1L}) {
                Offset d{0, 0, 0};
                d[a] = s;
                if (auto nb = g.shift(node, d)) kink[*nb] = 1;
            }
    }
    for (Index node : g.interior_nodes()) {
        if (kink[node]) {
            ++r.excluded;
            continue;
        }
        const double value = gradient_central(u, node).squaredNorm() - 1.0;
        r.field[node] = value;
        r.evaluated[node] = 1;
        r.max_abs = std::max(r.max_abs, std::abs(value));
        ++r.count;
    }
    if (r.count == 0) fail(ErrorCode::EmptyInterior, "no interior node away from kinks");
    return r;
}

// -- comparison with cones ---------------------------------------------------

namespace {

struct SubBox {
    std::vector<Index> interior;
    std::vector<Index> boundary;
};

struct ConeSpec {
    Point vertex{};
    double slope = 0.0;
    std::size_t box = 0;
};

struct ConePlan {
    std::vector<SubBox> boxes;
    std::vector<ConeSpec> cones;
};

ConePlan plan_cones(const Grid& g, std::size_t n_cones, std::size_t n_subdomains, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const Box bounds = g.bounds();
    ConePlan plan;
    const std::size_t boxes = std::max<std::size_t>(n_subdomains, 1);
    for (std::size_t b = 0; b < boxes; ++b) {
        Offset lo{0, 0, 0}, hi{0, 0, 0};
        for (int a = 0; a < g.dim(); ++a) {
            const long N = g.nodes(a);
            if (b == 0 || N < 3) {
                hi[a] = N - 1;
                continue;
            }
            lo[a] = std::uniform_int_distribution<long>(0, N - 3)(rng);
            hi[a] = std::uniform_int_distribution<long>(lo[a] + 2, N - 1)(rng);
        }
        auto inside = [&](const Offset& idx) {
            for (int a = 0; a < g.dim(); ++a)
                if (idx[a] < lo[a] || idx[a] > hi[a]) return false;
            return true;
        };
        SubBox sb;
        for (Index node : g.region_nodes()) {
            const Offset idx = g.multi_index(node);
            if (!inside(idx)) continue;
            bool interior = true;
            for (int a = 0; a < g.dim() && interior; ++a)
                for (long s : {-1L, 1L}) {
                    Offset nb = idx;
                    nb[a] += s;
                    if (!inside(nb) || !g.in_lattice(nb) || !g.in_region(g.linear_index(nb))) interior = false;
                }
            (interior ? sb.interior : sb.boundary).push_back(node);
        }
        plan.boxes.push_back(std::move(sb));

        Point blo{}, bhi{};
        for (int a = 0; a < g.dim(); ++a) {
            blo[a] = g.origin()[a] + static_cast<double>(lo[a]) * g.h();
            bhi[a] = g.origin()[a] + static_cast<double>(hi[a]) * g.h();
        }
        for (std::size_t c = 0; c < n_cones; ++c) {
            ConeSpec spec;
            spec.box = b;
            for (;;) {
                bool in_box = true;
                for (int a = 0; a < g.dim(); ++a) {
                    const double span = bounds.hi[a] - bounds.lo[a];
                    spec.vertex[a] = bounds.lo[a] - 0.5 * span + 2.0 * span * unit(rng);
                    in_box = in_box && spec.vertex[a] >= blo[a] && spec.vertex[a] <= bhi[a];
                }
                if (!in_box) break;
            }
            const double magnitude = std::pow(10.0, -1.0 + 2.0 * unit(rng));
            spec.slope = unit(rng) < 0.5 ? -magnitude : magnitude;
            plan.cones.push_back(spec);
        }
    }
    return plan;
}

struct ConeOutcome {
    double max_excess;
    double min_excess;
};

ConeOutcome evaluate_cone(const GridFunction& u, const SubBox& box, const ConeSpec& spec) {
    const Grid& g = u.grid();
    auto diff = [&](Index node) {
        const Point x = g.coord(node);
        double d2 = 0.0;
        for (int a = 0; a < g.dim(); ++a) d2 += (x[a] - spec.vertex[a]) * (x[a] - spec.vertex[a]);
        return u[node] - spec.slope * std::sqrt(d2);
    };
    const double inf = std::numeric_limits<double>::infinity();
    double imax = -inf, imin = inf, bmax = -inf, bmin = inf;
    for (Index n : box.interior) {
        const double w = diff(n);
        imax = std::max(imax, w);
        imin = std::min(imin, w);
    }
    for (Index n : box.boundary) {
        const double w = diff(n);
        bmax = std::max(bmax, w);
        bmin = std::min(bmin, w);
    }
    if (box.interior.empty() || box.boundary.empty()) return {-inf, -inf};
    return {imax - bmax, bmin - imin};
}

ConeCheckReport assemble(const Grid& g, const ConePlan& plan, const std::vector<ConeOutcome>& out,
                         double tol_constant) {
    ConeCheckReport report;
    report.cones_tested = plan.cones.size();
    report.subdomains = plan.boxes.size();
    for (std::size_t k = 0; k < plan.cones.size(); ++k) {
        const ConeSpec& spec = plan.cones[k];
        const double tol = tol_constant * g.h() * (1.0 + std::abs(spec.slope));
        report.worst_violation = std::max({report.worst_violation, out[k].max_excess, out[k].min_excess});
        if (out[k].max_excess > tol) report.failing_cases.push_back({spec.vertex, spec.slope, spec.box, out[k].max_excess - tol, false});
        if (out[k].min_excess > tol) report.failing_cases.push_back({spec.vertex, spec.slope, spec.box, out[k].min_excess - tol, true});
    }
    return report;
}

} // namespace

ConeCheckReport cone_comparison_check(const GridFunction& u, std::size_t n_cones, std::size_t n_subdomains,
                                      std::uint64_t seed, double tol_constant) {
    const ConePlan plan = plan_cones(u.grid(), n_cones, n_subdomains, seed);
    std::vector<ConeOutcome> out(plan.cones.size());
    const long count = static_cast<long>(plan.cones.size());
#pragma omp parallel for schedule(dynamic, 4)
    for (long k = 0; k < count; ++k) {
        const ConeSpec& spec = plan.cones[static_cast<std::size_t>(k)];
        out[static_cast<std::size_t>(k)] = evaluate_cone(u, plan.boxes[spec.box], spec);
    }
    return assemble(u.grid(), plan, out, tol_constant);
}

// -- penalization ------------------------------------------------------------

namespace {

inline double doubled(double ux, double vy, double alpha, long sum_sq, double h) {
    return ux - vy - 0.5 * alpha * (static_cast<double>(sum_sq) * (h * h));
}

struct PenaltySetup {
    double direct_max;
    double excess;  // max u - min v - max(u - v)
    double oscillation;
};

PenaltySetup prepare(const GridFunction& u, const GridFunction& v, std::span<const double> alphas) {
    if (!u.grid().same_layout(v.grid())) fail(ErrorCode::GridMismatch, "u and v live on different grids");
    for (std::size_t k = 0; k < alphas.size(); ++k) {
        if (!(alphas[k] > 0.0)) fail(ErrorCode::InvalidArgument, "alphas must be positive");
        if (k > 0 && !(alphas[k] > alphas[k - 1])) fail(ErrorCode::InvalidArgument, "alphas must increase");
    }
    const double inf = std::numeric_limits<double>::infinity();
    double dmax = -inf, umax = -inf, umin = inf, vmax = -inf, vmin = inf;
    for (Index n : u.grid().region_nodes()) {
        dmax = std::max(dmax, u[n] - v[n]);
        umax = std::max(umax, u[n]);
        umin = std::min(umin, u[n]);
        vmax = std::max(vmax, v[n]);
        vmin = std::min(vmin, v[n]);
    }
    return {dmax, std::max(0.0, umax - vmin - dmax), (umax - vmin) - (umin - vmax)};
}

void finish(PenalizationReport& r, const Grid& g) {
    if (!r.steps.empty()) r.limit_estimate = r.steps.back().M;
    for (auto& s : r.steps) {
        const Offset a = g.multi_index(s.x), b = g.multi_index(s.y);
        long sq = 0;
        for (int k = 0; k < kMaxDim; ++k) sq += (a[k] - b[k]) * (a[k] - b[k]);
        s.alpha_psi = 0.5 * s.alpha * (static_cast<double>(sq) * (g.h() * g.h()));
    }
}

} // namespace

PenalizationReport penalization_diagnostic(const GridFunction& u, const GridFunction& v,
                                           std::span<const double> alphas) {
    const PenaltySetup setup = prepare(u, v, alphas);
    const Grid& g = u.grid();
    PenalizationReport report;
    report.direct_max = setup.direct_max;
    report.oscillation = setup.oscillation;

    const auto region = g.region_nodes();
    const long count = static_cast<long>(region.size());
    std::vector<double> best_value(region.size());
    std::vector<Index> best_y(region.size());

    for (double alpha : alphas) {
        const double reach = std::sqrt(2.0 * setup.excess / alpha) * (1.0 + 1e-9) / g.h() + 1e-9;
        std::array<long, kMaxDim> r{0, 0, 0};
        for (int a = 0; a < g.dim(); ++a) r[a] = std::min(static_cast<long>(std::floor(reach)), g.nodes(a) - 1);
        struct Off {
            Offset o;
            long sq;
        };
        std::vector<Off> offsets;
        for (long k = -r[2]; k <= r[2]; ++k)
            for (long j = -r[1]; j <= r[1]; ++j)
                for (long i = -r[0]; i <= r[0]; ++i) {
                    const long sq = i * i + j * j + k * k;
                    if (static_cast<double>(sq) <= reach * reach) offsets.push_back({{i, j, k}, sq});
                }

#pragma omp parallel for schedule(static)
        for (long t = 0; t < count; ++t) {
            const Index x = region[static_cast<std::size_t>(t)];
            const Offset ix = g.multi_index(x);
            double best = -std::numeric_limits<double>::infinity();
            Index arg = x;
            for (const auto& off : offsets) {
                const Offset iy{ix[0] + off.o[0], ix[1] + off.o[1], ix[2] + off.o[2]};
                if (!g.in_lattice(iy)) continue;
                const Index y = g.linear_index(iy);
                if (!g.in_region(y)) continue;
                const double w = doubled(u[x], v[y], alpha, off.sq, g.h());
                if (w > best) {
                    best = w;
                    arg = y;
                }
            }
            best_value[static_cast<std::size_t>(t)] = best;
            best_y[static_cast<std::size_t>(t)] = arg;
        }

        PenalizationStep step;
        step.alpha = alpha;
        step.M = -std::numeric_limits<double>::infinity();
        for (std::size_t t = 0; t < region.size(); ++t)
            if (best_value[t] > step.M) {
                step.M = best_value[t];
                step.x = region[t];
                step.y = best_y[t];
            }
        report.steps.push_back(step);
    }
    finish(report, g);
    return report;
}

// -- Aronsson ----------------------------------------------------------------

AronssonSample aronsson_sample(const GridPtr& grid) {
    const Grid& g = *grid;
    if (g.dim() != 2) fail(ErrorCode::Not2D, "the Aronsson function is defined in two dimensions");
    AronssonSample s;
    s.values = GridFunction::sample(grid, [](const Point& x) {
        return std::cbrt(std::pow(std::abs(x[0]), 4.0)) - std::cbrt(std::pow(std::abs(x[1]), 4.0));
    });
    const double tiny = 1e-9 * g.h();
    std::vector<std::uint8_t> on_axis(g.size(), 0);
    for (Index n : g.region_nodes()) {
        const Point x = g.coord(n);
        if (std::abs(x[0]) <= tiny || std::abs(x[1]) <= tiny) {
            on_axis[n] = 1;
            s.axis_nodes.push_back(n);
        }
    }
    s.exclude.assign(g.size(), 0);
    for (Index n : g.region_nodes())
        for (long j = -1; j <= 1; ++j)
            for (long i = -1; i <= 1; ++i)
                if (auto nb = g.shift(n, {i, j, 0}); nb && on_axis[*nb]) s.exclude[n] = 1;
    return s;
}

namespace reference {

PenalizationReport penalization_diagnostic(const GridFunction& u, const GridFunction& v,
                                           std::span<const double> alphas) {
    const PenaltySetup setup = prepare(u, v, alphas);
    const Grid& g = u.grid();
    PenalizationReport report;
    report.direct_max = setup.direct_max;
    report.oscillation = setup.oscillation;
    for (double alpha : alphas) {
        PenalizationStep step;
        step.alpha = alpha;
        step.M = -std::numeric_limits<double>::infinity();
        for (Index x : g.region_nodes()) {
            const Offset ix = g.multi_index(x);
            for (Index y : g.region_nodes()) {
                const Offset iy = g.multi_index(y);
                long sq = 0;
                for (int a = 0; a < kMaxDim; ++a) sq += (iy[a] - ix[a]) * (iy[a] - ix[a]);
                const double w = doubled(u[x], v[y], alpha, sq, g.h());
                if (w > step.M) {
                    step.M = w;
                    step.x = x;
                    step.y = y;
                }
            }
        }
        report.steps.push_back(step);
    }
    finish(report, g);
    return report;
}

ConeCheckReport cone_comparison_check(const GridFunction& u, std::size_t n_cones, std::size_t n_subdomains,
                                      std::uint64_t seed, double tol_constant) {
    const ConePlan plan = plan_cones(u.grid(), n_cones, n_subdomains, seed);
    std::vector<ConeOutcome> out;
    for (const auto& spec : plan.cones) out.push_back(evaluate_cone(u, plan.boxes[spec.box], spec));
    return assemble(u.grid(), plan, out, tol_constant);
}

} // namespace reference

} // namespace viscograd
