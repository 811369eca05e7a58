#include "viscograd/solver.hpp"

#include "viscograd/error.hpp"
#include "viscograd/stencil.hpp"
#include "viscograd/verify.hpp"

#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

namespace viscograd {

namespace {

double residual_or_zero(const GridFunction& u) {
    try {
        return infinity_residual(u).max_abs;
    } catch (const Error& e) {
        if (e.code() != ErrorCode::EmptyInterior) throw;
        return 0.0;
    }
}

} // namespace

// -- boundary data -----------------------------------------------------------

BoundaryData BoundaryData::from_function(std::function<double(const Point&)> f, std::string label) {
    BoundaryData b;
    b.f_ = std::move(f);
    b.label_ = std::move(label);
    return b;
}

BoundaryData BoundaryData::from_trace(GridFunction trace, std::string label) {
    BoundaryData b;
    b.trace_ = std::move(trace);
    b.label_ = std::move(label);
    return b;
}

double BoundaryData::at(const Grid& grid, Index node) const {
    if (f_) return f_(grid.coord(node));
    if (!trace_->grid().same_layout(grid)) fail(ErrorCode::GridMismatch, "boundary trace lives on a different grid");
    return (*trace_)[node];
}

double BoundaryData::strip_value(const Point& x) const {
    if (f_) return f_(x);
    const Grid& g = trace_->grid();
    double best = std::numeric_limits<double>::infinity();
    double value = 0.0;
    for (Index node : g.boundary_nodes()) {
        const Point y = g.coord(node);
        double d = 0.0;
        for (int a = 0; a < g.dim(); ++a) d += (x[a] - y[a]) * (x[a] - y[a]);
        if (d < best) {
            best = d;
            value = (*trace_)[node];
        }
    }
    return value;
}

void BoundaryData::apply(GridFunction& u) const {
    for (Index node : u.grid().boundary_nodes()) u[node] = at(u.grid(), node);
    u.set_boundary_pinned(true);
}

GridFunction BoundaryData::initial_guess(const GridPtr& grid) const {
    GridFunction u(grid);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (Index node : grid->boundary_nodes()) {
        const double v = at(*grid, node);
        u[node] = v;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double mid = 0.5 * (lo + hi);
    for (Index node : grid->interior_nodes()) u[node] = mid;
    u.set_boundary_pinned(true);
    return u;
}

void ContinuationSchedule::validate(int dim) const {
    if (m_values.empty()) fail(ErrorCode::InvalidSchedule, "empty exponent schedule");
    for (std::size_t k = 0; k < m_values.size(); ++k) {
        if (!(m_values[k] > dim)) fail(ErrorCode::InvalidSchedule, "every exponent must exceed the dimension");
        if (k > 0 && !(m_values[k] > m_values[k - 1]))
            fail(ErrorCode::InvalidSchedule, "exponents must strictly increase");
    }
    if (!(inner_tol > 0.0)) fail(ErrorCode::InvalidSchedule, "inner tolerance must be positive");
}

// -- simplicial energy -------------------------------------------------------

namespace {

// Kuhn triangulation: each lattice cell with corner c is split into n!
// simplices c = v0, v_k = v_{k-1} + e_{perm[k-1]}; the gradient component
// along perm[k-1] is (u(v_k) - u(v_{k-1})) / h.
struct SimplexMesh {
    int n = 0;
    double h = 0.0;
    double volume = 0.0;
    std::vector<Index> verts;  // (n + 1) per simplex
    std::vector<int> axes;     // n per simplex
    std::vector<std::size_t> adj_start;
    std::vector<std::pair<std::uint32_t, std::uint8_t>> adj;  // (simplex, position)

    std::size_t count() const { return axes.size() / static_cast<std::size_t>(n); }
};

SimplexMesh build_mesh(const Grid& g) {
    SimplexMesh mesh;
    mesh.n = g.dim();
    mesh.h = g.h();
    std::vector<int> perm(static_cast<std::size_t>(mesh.n));
    std::iota(perm.begin(), perm.end(), 0);
    double factorial = 1.0;
    for (int k = 2; k <= mesh.n; ++k) factorial *= k;
    mesh.volume = g.cell_volume() / factorial;

    std::vector<std::vector<int>> perms;
    do perms.push_back(perm);
    while (std::next_permutation(perm.begin(), perm.end()));

    for (Index c : g.region_nodes()) {
        bool cell = true;
        for (int corner = 1; corner < (1 << mesh.n) && cell; ++corner) {
            Offset d{0, 0, 0};
            for (int a = 0; a < mesh.n; ++a) d[a] = corner >> a & 1;
            if (!g.shift(c, d)) cell = false;
        }
        if (!cell) continue;
        for (const auto& p : perms) {
            Index v = c;
            mesh.verts.push_back(v);
            for (int k = 0; k < mesh.n; ++k) {
                v += g.stride(p[static_cast<std::size_t>(k)]);
                mesh.verts.push_back(v);
                mesh.axes.push_back(p[static_cast<std::size_t>(k)]);
            }
        }
    }

    std::vector<std::size_t> counts(g.size() + 1, 0);
    const std::size_t stride = static_cast<std::size_t>(mesh.n) + 1;
    for (Index v : mesh.verts) ++counts[v + 1];
    std::partial_sum(counts.begin(), counts.end(), counts.begin());
    mesh.adj_start = counts;
    mesh.adj.resize(mesh.verts.size());
    std::vector<std::size_t> fill(counts.begin(), counts.end() - 1);
    for (std::size_t s = 0; s < mesh.count(); ++s)
        for (std::size_t k = 0; k < stride; ++k) {
            const Index v = mesh.verts[s * stride + k];
            mesh.adj[fill[v]++] = {static_cast<std::uint32_t>(s), static_cast<std::uint8_t>(k)};
        }
    return mesh;
}

// Per-simplex gradients g (n each) and norms, computed in parallel.
void simplex_gradients(const SimplexMesh& mesh, std::span<const double> u, std::vector<double>& g,
                       std::vector<double>& norm) {
    const std::size_t S = mesh.count();
    const std::size_t n = static_cast<std::size_t>(mesh.n);
    g.assign(S * n, 0.0);
    norm.assign(S, 0.0);
    const double inv_h = 1.0 / mesh.h;
#pragma omp parallel for schedule(static)
    for (long ls = 0; ls < static_cast<long>(S); ++ls) {
        const std::size_t s = static_cast<std::size_t>(ls);
        const Index* v = &mesh.verts[s * (n + 1)];
        double sq = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double comp = (u[v[k + 1]] - u[v[k]]) * inv_h;
            g[s * n + static_cast<std::size_t>(mesh.axes[s * n + k])] = comp;
            sq += comp * comp;
        }
        norm[s] = std::sqrt(sq);
    }
}

// E = G^m * S with G = max |g|; returns (G, S).
std::pair<double, double> scaled_energy(const SimplexMesh& mesh, const std::vector<double>& norm, double m) {
    double G = 0.0;
    for (double r : norm) G = std::max(G, r);
    if (G == 0.0) return {0.0, 0.0};
    double S = 0.0;
    for (double r : norm) S += std::pow(r / G, m);  // fixed order
    return {G, S * mesh.volume};
}

double energy_from_scaled(double G, double S, double m) {
    if (G == 0.0) return 0.0;
    const double log_e = m * std::log(G) + std::log(S);
    if (!(log_e <= std::log(std::numeric_limits<double>::max())))
        fail(ErrorCode::Overflow, "|Du|^m exceeds the double range; rescale the data to |b| <= 1");
    return std::pow(G, m) * S;
}

// Node gradient from per-simplex weights: the vertex at position k collects
// w_s (g[axis_{k-1}] - g[axis_k]) / h, missing terms dropped at the ends.
void gather(const SimplexMesh& mesh, const std::vector<double>& g, const std::vector<double>& w,
            std::span<double> grad) {
    const std::size_t n = static_cast<std::size_t>(mesh.n);
    const double inv_h = 1.0 / mesh.h;
    const long N = static_cast<long>(grad.size());
#pragma omp parallel for schedule(static)
    for (long li = 0; li < N; ++li) {
        const std::size_t i = static_cast<std::size_t>(li);
        double acc = 0.0;
        for (std::size_t e = mesh.adj_start[i]; e < mesh.adj_start[i + 1]; ++e) {
            const std::size_t s = mesh.adj[e].first;
            const std::size_t k = mesh.adj[e].second;
            double c = 0.0;
            if (k >= 1) c += g[s * n + static_cast<std::size_t>(mesh.axes[s * n + k - 1])];
            if (k < n) c -= g[s * n + static_cast<std::size_t>(mesh.axes[s * n + k])];
            acc += w[s] * c;
        }
        grad[i] = acc * inv_h;
    }
}

double free_norm_inf(std::span<const double> grad, const std::vector<Index>& free) {
    double m = 0.0;
    for (Index i : free) m = std::max(m, std::abs(grad[i]));
    return m;
}

} // namespace

double m_energy(const GridFunction& u, double m) {
    if (!(m >= 1.0)) fail(ErrorCode::InvalidArgument, "exponent must be >= 1");
    const SimplexMesh mesh = build_mesh(u.grid());
    std::vector<double> g, norm;
    simplex_gradients(mesh, u.values(), g, norm);
    const auto [G, S] = scaled_energy(mesh, norm, m);
    return energy_from_scaled(G, S, m);
}

double m_energy_gradient(const GridFunction& u, double m, std::span<double> grad) {
    if (grad.size() != u.grid().size()) fail(ErrorCode::InvalidArgument, "gradient buffer has the wrong size");
    const SimplexMesh mesh = build_mesh(u.grid());
    std::vector<double> g, norm;
    simplex_gradients(mesh, u.values(), g, norm);
    const auto [G, S] = scaled_energy(mesh, norm, m);
    const double E = energy_from_scaled(G, S, m);
    std::vector<double> w(mesh.count());
    for (std::size_t s = 0; s < w.size(); ++s)
        w[s] = norm[s] == 0.0 ? (m == 2.0 ? 2.0 * mesh.volume : 0.0) : m * std::pow(norm[s], m - 2.0) * mesh.volume;
    gather(mesh, g, w, grad);
    for (double v : grad)
        if (!std::isfinite(v)) fail(ErrorCode::Overflow, "energy gradient overflow");
    return E;
}

namespace reference {

double m_energy_gradient(const GridFunction& u, double m, std::span<double> grad) {
    const SimplexMesh mesh = build_mesh(u.grid());
    const std::size_t n = static_cast<std::size_t>(mesh.n);
    std::fill(grad.begin(), grad.end(), 0.0);
    double E = 0.0;
    for (std::size_t s = 0; s < mesh.count(); ++s) {
        const Index* v = &mesh.verts[s * (n + 1)];
        double diffs[kMaxDim];
        double sq = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            diffs[k] = (u[v[k + 1]] - u[v[k]]) / mesh.h;
            sq += diffs[k] * diffs[k];
        }
        const double r = std::sqrt(sq);
        E += std::pow(r, m) * mesh.volume;
        const double w = r == 0.0 ? (m == 2.0 ? 2.0 * mesh.volume : 0.0) : m * std::pow(r, m - 2.0) * mesh.volume;
        for (std::size_t k = 0; k < n; ++k) {
            grad[v[k + 1]] += w * diffs[k] / mesh.h;
            grad[v[k]] -= w * diffs[k] / mesh.h;
        }
    }
    return E;
}

} // namespace reference

// -- minimisation ------------------------------------------------------------

namespace {

// E_m is summed in a different order than J, so a step that lowers J can
// raise E_m by a few ulps.
constexpr double kEnergyNoise = 1e-12;

// Levenberg term, relative to the largest simplex weight (which is 1).
constexpr double kRegularization = 1e-14;

// J = E^(1/m), dJ/du and the Newton system of E_m on a fixed mesh.
class NormalizedEnergy {
public:
    NormalizedEnergy(const Grid& grid, double m) : mesh_(build_mesh(grid)), m_(m) {}

    double value(std::span<const double> u) {
        simplex_gradients(mesh_, u, g_, norm_);
        const auto [G, S] = scaled_energy(mesh_, norm_, m_);
        return G == 0.0 ? 0.0 : G * std::pow(S, 1.0 / m_);
    }

    double value_and_gradient(std::span<const double> u, std::span<double> grad) {
        simplex_gradients(mesh_, u, g_, norm_);
        const auto [G, S] = scaled_energy(mesh_, norm_, m_);
        G_ = G;
        if (G == 0.0) {
            std::fill(grad.begin(), grad.end(), 0.0);
            return 0.0;
        }
        const double root = std::pow(S, 1.0 / m_);
        const double J = G * root;
        newton_scale_ = J / (G * G * S);
        w_.resize(mesh_.count());
        for (std::size_t s = 0; s < w_.size(); ++s) {
            const double t = norm_[s] / G / root;
            w_[s] = std::pow(t, m_ - 2.0) * mesh_.volume / J;
        }
        gather(mesh_, g_, w_, grad);
        return J;
    }

    /// Hessian of E_m / (m G^(m-2)) at the point of the last
    /// value_and_gradient call, over the nodes with slot >= 0, plus the
    /// Levenberg term. Per simplex: B^T w (I + (m-2) q q^T) B, q = g/|g|.
    void newton_matrix(const std::vector<long>& slot, std::vector<Eigen::Triplet<double>>& out) const {
        out.clear();
        if (G_ == 0.0) return;
        const std::size_t n = static_cast<std::size_t>(mesh_.n);
        const double inv_h2 = 1.0 / (mesh_.h * mesh_.h);
        Mat local(n + 1, n + 1), M(n, n), B = Mat::Zero(n, n + 1);
        for (std::size_t k = 0; k < n; ++k) {
            B(k, k) = -1.0;
            B(k, k + 1) = 1.0;
        }
        for (std::size_t s = 0; s < mesh_.count(); ++s) {
            const double r = norm_[s] / G_;
            const double w = (r == 0.0 ? (m_ == 2.0 ? 1.0 : 0.0) : std::pow(r, m_ - 2.0));
            M = (w + kRegularization) * Mat::Identity(n, n);
            if (r > 0.0 && m_ != 2.0) {
                Vec q(n);
                const Index* v = &mesh_.verts[s * (n + 1)];
                for (std::size_t k = 0; k < n; ++k) q(k) = (u_at(v[k + 1]) - u_at(v[k]));
                q.normalize();
                M += w * (m_ - 2.0) * q * q.transpose();
            }
            local = B.transpose() * M * B * (mesh_.volume * inv_h2);
            const Index* v = &mesh_.verts[s * (n + 1)];
            for (std::size_t a = 0; a <= n; ++a) {
                const long ra = slot[v[a]];
                if (ra < 0) continue;
                for (std::size_t c = 0; c <= n; ++c) {
                    const long rc = slot[v[c]];
                    if (rc >= 0) out.emplace_back(ra, rc, local(a, c));
                }
            }
        }
    }

    void remember(std::span<const double> u) { u_ = u; }

    /// dJ/du divided by this is the gradient of the scaled E_m that
    /// newton_matrix differentiates.
    double newton_scale() const { return newton_scale_; }

private:
    double u_at(Index i) const { return u_[i]; }

    SimplexMesh mesh_;
    double m_;
    double G_ = 0.0;
    double newton_scale_ = 1.0;
    std::span<const double> u_;
    std::vector<double> g_, norm_, w_;
};

double dot_free(std::span<const double> a, std::span<const double> b, const std::vector<Index>& free) {
    double s = 0.0;
    for (Index i : free) s += a[i] * b[i];
    return s;
}

} // namespace

MinimizeResult minimize_m_energy(const BoundaryData& b, double m, const GridFunction& init,
                                 const MinimizeOptions& options) {
    const Grid& grid = init.grid();
    if (!(m > grid.dim())) fail(ErrorCode::InvalidArgument, "exponent must exceed the dimension");

    MinimizeResult result;
    result.u = init;
    b.apply(result.u);
    const std::vector<Index> free(grid.interior_nodes().begin(), grid.interior_nodes().end());
    const double scale = grid.cell_volume();
    std::vector<long> slot(grid.size(), -1);
    for (std::size_t k = 0; k < free.size(); ++k) slot[free[k]] = static_cast<long>(k);

    NormalizedEnergy J(grid, m);
    std::vector<double> x(result.u.values().begin(), result.u.values().end());
    std::vector<double> grad(x.size(), 0.0), trial(x), trial_grad(x.size(), 0.0), dir(x.size(), 0.0);
    double value = J.value_and_gradient(x, grad);
    double energy = m_energy(result.u, m);

    const auto unknowns = static_cast<Eigen::Index>(free.size());
    Eigen::SparseMatrix<double> H(unknowns, unknowns);
    std::vector<Eigen::Triplet<double>> triplets;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
    bool analysed = false;
    Vec rhs(unknowns);

    std::size_t it = 0;
    bool converged = false;
    for (; it < options.max_iters; ++it) {
        const double gnorm = free_norm_inf(grad, free);
        result.gradient_norm = gnorm / scale;
        if (gnorm / scale <= options.tol) {
            converged = true;
            break;
        }

        // Newton direction for E_m, in the scaled units of newton_matrix
        J.remember(x);
        J.newton_matrix(slot, triplets);
        H.setFromTriplets(triplets.begin(), triplets.end());
        if (!analysed) {
            solver.analyzePattern(H);
            analysed = true;
        }
        solver.factorize(H);
        for (std::size_t k = 0; k < free.size(); ++k) rhs(static_cast<Eigen::Index>(k)) = -grad[free[k]] / J.newton_scale();
        bool newton = solver.info() == Eigen::Success;
        if (newton) {
            const Vec d = solver.solve(rhs);
            newton = solver.info() == Eigen::Success && d.allFinite();
            if (newton)
                for (std::size_t k = 0; k < free.size(); ++k) dir[free[k]] = d(static_cast<Eigen::Index>(k));
        }
        double slope = dot_free(grad, dir, free);
        if (!newton || !(slope < 0.0)) {
            for (Index i : free) dir[i] = -grad[i];
            slope = -dot_free(grad, grad, free);
        }

        // Armijo backtracking on J. Once the decrease drops below the
        // rounding noise of J, fall back to the approximate Wolfe test on the
        // slope.
        bool accepted = false;
        bool have_grad = false;
        double trial_value = value;
        const double noise = 1e-12 * std::abs(value);
        double step = 1.0;
        for (int bt = 0; bt < 60; ++bt) {
            for (Index i : free) trial[i] = x[i] + step * dir[i];
            trial_value = J.value(trial);
            if (trial_value <= value + 1e-4 * step * slope) {
                accepted = true;
                break;
            }
            if (std::abs(trial_value - value) <= noise) {
                trial_value = J.value_and_gradient(trial, trial_grad);
                if (dot_free(trial_grad, dir, free) <= -0.8 * slope) {
                    accepted = have_grad = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if (!accepted) break;  // stagnation: no decrease representable along the direction

        if (!have_grad) trial_value = J.value_and_gradient(trial, trial_grad);
        std::swap(x, trial);
        std::swap(grad, trial_grad);
        value = trial_value;
        if (options.assert_monotone) {
            std::copy(x.begin(), x.end(), result.u.values().begin());
            const double e = m_energy(result.u, m);
            if (e > energy * (1.0 + kEnergyNoise)) ++result.monotonicity_breaks;
            energy = e;
        }
    }

    std::copy(x.begin(), x.end(), result.u.values().begin());
    result.energy = m_energy(result.u, m);
    result.iterations = it;
    result.converged = converged;
    result.gradient_norm = free_norm_inf(grad, free) / scale;
    return result;
}

SolveReport solve_by_continuation(const GridPtr& grid, const BoundaryData& b, const ContinuationSchedule& schedule) {
    schedule.validate(grid->dim());
    SolveReport report;
    report.method = "continuation";

    GridFunction u = b.initial_guess(grid);
    double lip_b = 0.0;
    for (Index node : grid->boundary_nodes())
        for (int a = 0; a < grid->dim(); ++a) {
            Offset d{0, 0, 0};
            d[a] = 1;
            if (auto nb = grid->shift(node, d); nb && grid->is_boundary(*nb))
                lip_b = std::max(lip_b, std::abs(u[*nb] - u[node]) / grid->h());
        }

    MinimizeOptions opts;
    opts.tol = schedule.inner_tol;
    opts.max_iters = schedule.max_inner_iters;
    opts.assert_monotone = false;
    report.converged = true;
    for (std::size_t k = 0; k < schedule.m_values.size(); ++k) {
        const double m = schedule.m_values[k];
        MinimizeResult stage;
        try {
            stage = minimize_m_energy(b, m, u, opts);
        } catch (const Error& e) {
            throw Error(e.code(), "stage " + std::to_string(k) + " (m=" + std::to_string(m) + ") failed: " + e.what());
        }
        if (k > 0) report.sup_norm_steps.push_back(sup_distance(stage.u, u));
        report.stages.push_back({m, stage.energy, stage.iterations, stage.converged, stage.gradient_norm});
        report.iterations += stage.iterations;
        report.converged = report.converged && stage.converged;
        u = std::move(stage.u);
        if (lip_b > 0.0) report.lipschitz_ratio = std::max(report.lipschitz_ratio, sampled_lipschitz(u) / lip_b);
    }
    report.lipschitz_flag = report.lipschitz_ratio > 2.0;
    report.final = std::move(u);
    report.residual_linf = residual_or_zero(report.final);
    return report;
}

// -- tug-of-war --------------------------------------------------------------

SolveReport solve_by_tug_of_war(const GridPtr& grid, const BoundaryData& b, double eps, const TugOfWarOptions& options) {
    const Grid& g = *grid;
    if (!(eps >= g.h() * (1.0 - 1e-12))) fail(ErrorCode::InvalidArgument, "eps must be at least h");
    const long pad = static_cast<long>(std::ceil(eps / g.h() - 1e-9));

    std::array<long, kMaxDim> shape = g.shape();
    Point origin = g.origin();
    for (int a = 0; a < g.dim(); ++a) {
        shape[a] += 2 * pad;
        origin[a] -= static_cast<double>(pad) * g.h();
    }
    const Grid padded(g.dim(), shape, g.h(), origin, {});
    auto to_padded = [&](Index node) {
        Offset idx = g.multi_index(node);
        for (int a = 0; a < g.dim(); ++a) idx[a] += pad;
        return padded.linear_index(idx);
    };

    const GridFunction start = options.init ? *options.init : b.initial_guess(grid);
    if (!start.grid().same_layout(g)) fail(ErrorCode::GridMismatch, "initial guess lives on a different grid");

    std::vector<double> values(padded.size(), 0.0);
    std::vector<std::uint8_t> is_free(padded.size(), 0);
    std::vector<Index> free;
    for (Index node : g.interior_nodes()) {
        const Index p = to_padded(node);
        is_free[p] = 1;
        values[p] = start[node];
        free.push_back(p);
    }
    std::vector<std::uint8_t> known(padded.size(), 0);
    for (Index node : g.region_nodes()) {
        if (g.is_interior(node)) continue;
        const Index p = to_padded(node);
        values[p] = b.at(g, node);
        known[p] = 1;
    }

    const BallStencil stencil(padded, eps);
    SolveReport report;
    report.method = "tugofwar";
    report.data_min = std::numeric_limits<double>::infinity();
    report.data_max = -report.data_min;
    for (Index p : free) {
        if (!stencil.fits(p)) fail(ErrorCode::BallExitsDomain, "tug-of-war stencil leaves the padded lattice");
        stencil.for_each_corner(p, [&](Index q) {
            if (is_free[q]) return;
            if (!known[q]) {
                values[q] = b.strip_value(padded.coord(q));
                known[q] = 1;
            }
            report.data_min = std::min(report.data_min, values[q]);
            report.data_max = std::max(report.data_max, values[q]);
        });
    }
    if (free.empty()) {
        report.data_min = report.data_max = 0.0;
    }
    const double slack = 4.0 * std::numeric_limits<double>::epsilon() *
                         std::max({1.0, std::abs(report.data_min), std::abs(report.data_max)});

    const double tol = options.tol * std::max({1.0, std::abs(report.data_min), std::abs(report.data_max)});
    std::vector<double> next;
    std::size_t sweep = 0;
    double update = 0.0;
    report.converged = free.empty();
    while (!report.converged && sweep < options.max_iters) {
        update = 0.0;
        if (options.jacobi) {
            next = values;
            const long F = static_cast<long>(free.size());
#pragma omp parallel for schedule(static) reduction(max : update)
            for (long k = 0; k < F; ++k) {
                const Index p = free[static_cast<std::size_t>(k)];
                const BallExtrema e = stencil.extrema(values, p);
                const double v = 0.5 * (e.max + e.min);
                update = std::max(update, std::abs(v - values[p]));
                next[p] = v;
            }
            std::swap(values, next);
        } else {
            for (Index p : free) {
                const BallExtrema e = stencil.extrema(values, p);
                const double v = 0.5 * (e.max + e.min);
                update = std::max(update, std::abs(v - values[p]));
                values[p] = v;
            }
        }
        ++sweep;
        for (Index p : free)
            if (values[p] < report.data_min - slack || values[p] > report.data_max + slack) ++report.max_principle_violations;
        if (update <= tol) report.converged = true;
    }

    report.final = start;
    for (Index node : g.boundary_nodes()) report.final[node] = values[to_padded(node)];
    for (Index node : g.interior_nodes()) report.final[node] = values[to_padded(node)];
    report.final.set_boundary_pinned(true);
    report.iterations = sweep;
    report.last_update = update;
    report.residual_linf = residual_or_zero(report.final);
    return report;
}

// -- distance ----------------------------------------------------------------

GridFunction distance_to_boundary(const GridPtr& grid) {
    const Grid& g = *grid;
    const int n = g.dim();
    constexpr Index kNone = std::numeric_limits<Index>::max();
    GridFunction d(grid, std::numeric_limits<double>::infinity());
    std::vector<Index> source(g.size(), kNone);
    for (Index node : g.boundary_nodes()) {
        d[node] = 0.0;
        source[node] = node;
    }
    auto dist = [&](Index a, Index b) {
        const Point x = g.coord(a), y = g.coord(b);
        double s = 0.0;
        for (int k = 0; k < n; ++k) s += (x[k] - y[k]) * (x[k] - y[k]);
        return std::sqrt(s);
    };

    std::vector<Offset> steps;
    Offset o{0, 0, 0};
    const long rj = n > 1 ? 1 : 0, rk = n > 2 ? 1 : 0;
    for (o[2] = -rk; o[2] <= rk; ++o[2])
        for (o[1] = -rj; o[1] <= rj; ++o[1])
            for (o[0] = -1; o[0] <= 1; ++o[0])
                if (o[0] != 0 || o[1] != 0 || o[2] != 0) steps.push_back(o);

    std::vector<std::vector<Index>> orders;
    for (int order = 0; order < (1 << n); ++order) {
        // raster order with axis a reversed when bit a is set
        std::vector<Index> nodes(g.interior_nodes().begin(), g.interior_nodes().end());
        std::sort(nodes.begin(), nodes.end(), [&](Index p, Index q) {
            const Offset a = g.multi_index(p), b = g.multi_index(q);
            for (int ax = n - 1; ax >= 0; --ax) {
                const long ka = (order >> ax & 1) ? -a[ax] : a[ax];
                const long kb = (order >> ax & 1) ? -b[ax] : b[ax];
                if (ka != kb) return ka < kb;
            }
            return false;
        });
        orders.push_back(std::move(nodes));
    }

    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& nodes : orders)
            for (Index node : nodes)
                for (const auto& off : steps) {
                    const auto nb = g.shift(node, off);
                    if (!nb || source[*nb] == kNone || source[*nb] == source[node]) continue;
                    const double cand = dist(node, source[*nb]);
                    if (cand < d[node] || (cand == d[node] && source[*nb] < source[node])) {
                        d[node] = cand;
                        source[node] = source[*nb];
                        changed = true;
                    }
                }
    }
    return d;
}

} // namespace viscograd
