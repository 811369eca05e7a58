#include "viscograd/stencil.hpp"

#include "viscograd/error.hpp"

#include <cmath>

namespace viscograd {

namespace {

constexpr double kSnap = 1e-12;

Offset unit(int axis, long s) {
    Offset d{0, 0, 0};
    d[axis] = s;
    return d;
}

Index neighbour(const Grid& g, Index node, const Offset& d) {
    auto nb = g.shift(node, d);
    if (!nb) fail(ErrorCode::StencilOutOfDomain, "stencil leaves the region");
    return *nb;
}

} // namespace

Vec gradient_central(const GridFunction& u, Index node) {
    const Grid& g = u.grid();
    if (!g.is_interior(node)) fail(ErrorCode::NotInterior, "gradient requested at a non-interior node");
    Vec grad(g.dim());
    const double inv = 1.0 / (2.0 * g.h());
    for (int a = 0; a < g.dim(); ++a) {
        const Index up = node + g.stride(a);
        const Index down = node - g.stride(a);
        grad(a) = (u[up] - u[down]) * inv;
    }
    return grad;
}

bool has_full_stencil(const Grid& g, Index node) noexcept {
    if (!g.is_interior(node)) return false;
    for (int a = 0; a < g.dim(); ++a)
        for (int b = a + 1; b < g.dim(); ++b)
            for (long sa : {-1L, 1L})
                for (long sb : {-1L, 1L}) {
                    Offset d{0, 0, 0};
                    d[a] = sa;
                    d[b] = sb;
                    if (!g.shift(node, d)) return false;
                }
    return true;
}

SymMatrix hessian_central(const GridFunction& u, Index node) {
    const Grid& g = u.grid();
    if (!g.is_interior(node)) fail(ErrorCode::NotInterior, "Hessian requested at a non-interior node");
    const int n = g.dim();
    const double h2 = g.h() * g.h();
    SymMatrix hess(n);
    const double centre = u[node];
    for (int a = 0; a < n; ++a) {
        const double up = u[node + g.stride(a)];
        const double down = u[node - g.stride(a)];
        hess.set(a, a, (up - 2.0 * centre + down) / h2);
        for (int b = a + 1; b < n; ++b) {
            Offset pp = unit(a, 1), pm = unit(a, 1), mp = unit(a, -1), mm = unit(a, -1);
            pp[b] = 1;
            pm[b] = -1;
            mp[b] = 1;
            mm[b] = -1;
            const double cross = u[neighbour(g, node, pp)] - u[neighbour(g, node, pm)] -
                                 u[neighbour(g, node, mp)] + u[neighbour(g, node, mm)];
            hess.set(a, b, cross / (4.0 * h2));
        }
    }
    return hess;
}

std::vector<Point> sphere_directions(int dim) {
    std::vector<Point> dirs;
    for (int a = 0; a < dim; ++a) {
        Point plus{0.0, 0.0, 0.0}, minus{0.0, 0.0, 0.0};
        plus[a] = 1.0;
        minus[a] = -1.0;
        dirs.push_back(plus);
        dirs.push_back(minus);
    }
    if (dim > 1) {
        const double c = 1.0 / std::sqrt(static_cast<double>(dim));
        for (int bits = 0; bits < (1 << dim); ++bits) {
            Point d{0.0, 0.0, 0.0};
            for (int a = 0; a < dim; ++a) d[a] = (bits >> a & 1) ? -c : c;
            dirs.push_back(d);
        }
    }
    return dirs;
}

BallStencil::BallStencil(const Grid& grid, double eps) : grid_(&grid), eps_(eps) {
    if (!(eps >= grid.h())) fail(ErrorCode::InvalidArgument, "ball radius must be at least the grid spacing");
    const int n = grid.dim();
    for (const Point& d : sphere_directions(n)) {
        std::array<long, kMaxDim> base{0, 0, 0};
        std::array<double, kMaxDim> frac{0.0, 0.0, 0.0};
        for (int a = 0; a < n; ++a) {
            const double t = eps * d[a] / grid.h();
            double fl = std::floor(t);
            double fr = t - fl;
            if (fr < kSnap) fr = 0.0;
            if (fr > 1.0 - kSnap) {
                fl += 1.0;
                fr = 0.0;
            }
            base[a] = static_cast<long>(fl);
            frac[a] = fr;
        }
        Direction dir;
        for (int corner = 0; corner < (1 << n); ++corner) {
            double w = 1.0;
            Offset off{0, 0, 0};
            bool used = true;
            for (int a = 0; a < n; ++a) {
                const bool upper = corner >> a & 1;
                if (upper && frac[a] == 0.0) {
                    used = false;
                    break;
                }
                off[a] = base[a] + (upper ? 1 : 0);
                w *= upper ? frac[a] : 1.0 - frac[a];
            }
            if (!used) continue;
            std::ptrdiff_t delta = 0;
            for (int a = 0; a < n; ++a) delta += static_cast<std::ptrdiff_t>(off[a]) * static_cast<std::ptrdiff_t>(grid.stride(a));
            dir.corners.push_back({delta, off, w});
        }
        dirs_.push_back(std::move(dir));
    }
}

bool BallStencil::fits(Index node) const noexcept {
    for (const auto& dir : dirs_)
        for (const auto& c : dir.corners)
            if (!grid_->shift(node, c.offset)) return false;
    return true;
}

double BallStencil::value(std::span<const double> values, Index node, int dir) const noexcept {
    double v = 0.0;
    for (const auto& c : dirs_[static_cast<std::size_t>(dir)].corners)
        v += c.weight * values[static_cast<Index>(static_cast<std::ptrdiff_t>(node) + c.delta)];
    return v;
}

BallExtrema BallStencil::extrema(std::span<const double> values, Index node) const noexcept {
    BallExtrema e{value(values, node, 0), 0.0, 0, 0};
    e.min = e.max;
    const int count = static_cast<int>(dirs_.size());
    for (int k = 1; k < count; ++k) {
        const double v = value(values, node, k);
        if (v > e.max) {
            e.max = v;
            e.argmax_dir = k;
        }
        if (v < e.min) {
            e.min = v;
            e.argmin_dir = k;
        }
    }
    return e;
}

BallExtrema ball_extrema(const GridFunction& u, Index node, double eps) {
    BallStencil stencil(u.grid(), eps);
    if (!u.grid().in_region(node) || !stencil.fits(node))
        fail(ErrorCode::BallExitsDomain, "sampled sphere leaves the region");
    return stencil.extrema(u.values(), node);
}

double interpolate(const GridFunction& u, const Point& x) {
    const Grid& g = u.grid();
    const int n = g.dim();
    Offset base{0, 0, 0};
    std::array<double, kMaxDim> frac{0.0, 0.0, 0.0};
    for (int a = 0; a < n; ++a) {
        const double t = (x[a] - g.origin()[a]) / g.h();
        double fl = std::floor(t);
        double fr = t - fl;
        if (fr < kSnap) fr = 0.0;
        if (fr > 1.0 - kSnap) {
            fl += 1.0;
            fr = 0.0;
        }
        base[a] = static_cast<long>(fl);
        frac[a] = fr;
    }
    double v = 0.0;
    for (int corner = 0; corner < (1 << n); ++corner) {
        double w = 1.0;
        Offset idx = base;
        bool used = true;
        for (int a = 0; a < n; ++a) {
            const bool upper = corner >> a & 1;
            if (upper && frac[a] == 0.0) {
                used = false;
                break;
            }
            idx[a] += upper ? 1 : 0;
            w *= upper ? frac[a] : 1.0 - frac[a];
        }
        if (!used) continue;
        if (!g.in_lattice(idx) || !g.in_region(g.linear_index(idx)))
            fail(ErrorCode::BallExitsDomain, "interpolation point outside the region");
        v += w * u[g.linear_index(idx)];
    }
    return v;
}

} // namespace viscograd
