#include "viscograd/grid.hpp"

#include "viscograd/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace viscograd {

Box Box::interval(double a, double b) {
    Box box;
    box.dim = 1;
    box.lo[0] = a;
    box.hi[0] = b;
    return box;
}

Box Box::rect(double x0, double x1, double y0, double y1) {
    Box box;
    box.dim = 2;
    box.lo = {x0, y0, 0.0};
    box.hi = {x1, y1, 0.0};
    return box;
}

Box Box::cube(double lo, double hi, int dim) {
    Box box;
    box.dim = dim;
    for (int a = 0; a < dim; ++a) {
        box.lo[a] = lo;
        box.hi[a] = hi;
    }
    return box;
}

Grid::Grid(int dim, std::array<long, kMaxDim> nodes, double h, Point origin,
           std::vector<std::uint8_t> mask)
    : dim_(dim), nodes_(nodes), h_(h), origin_(origin), mask_(std::move(mask)) {
    if (dim_ < 1 || dim_ > kMaxDim) fail(ErrorCode::InvalidArgument, "dimension must be 1..3");
    if (!(h_ > 0.0)) fail(ErrorCode::NonPositiveSpacing, "spacing must be positive");
    for (int a = dim_; a < kMaxDim; ++a) {
        nodes_[a] = 1;
        origin_[a] = 0.0;
    }
    size_ = 1;
    for (int a = 0; a < kMaxDim; ++a) {
        if (nodes_[a] < 1) fail(ErrorCode::EmptyDomain, "axis with no nodes");
        strides_[a] = size_;
        size_ *= static_cast<Index>(nodes_[a]);
    }
    if (mask_.empty()) mask_.assign(size_, 1);
    if (mask_.size() != size_) fail(ErrorCode::InvalidArgument, "mask size does not match lattice");

    kind_.assign(size_, kOutside);
    for (Index node = 0; node < size_; ++node) {
        if (!mask_[node]) continue;
        region_.push_back(node);
        const Offset idx = multi_index(node);
        bool interior = true;
        for (int a = 0; a < dim_ && interior; ++a) {
            for (long s : {-1L, 1L}) {
                Offset nb = idx;
                nb[a] += s;
                if (!in_lattice(nb) || !mask_[linear_index(nb)]) {
                    interior = false;
                    break;
                }
            }
        }
        kind_[node] = interior ? kInterior : kBoundary;
        (interior ? interior_ : boundary_).push_back(node);
    }
    if (region_.empty()) fail(ErrorCode::EmptyDomain, "mask selects no nodes");
}

double Grid::cell_volume() const noexcept {
    double v = 1.0;
    for (int a = 0; a < dim_; ++a) v *= h_;
    return v;
}

Offset Grid::multi_index(Index node) const noexcept {
    Offset idx{0, 0, 0};
    for (int a = kMaxDim - 1; a >= 0; --a) {
        idx[a] = static_cast<long>(node / strides_[a]);
        node %= strides_[a];
    }
    return idx;
}

Index Grid::linear_index(const Offset& idx) const noexcept {
    Index node = 0;
    for (int a = 0; a < kMaxDim; ++a) node += static_cast<Index>(idx[a]) * strides_[a];
    return node;
}

bool Grid::in_lattice(const Offset& idx) const noexcept {
    for (int a = 0; a < kMaxDim; ++a)
        if (idx[a] < 0 || idx[a] >= nodes_[a]) return false;
    return true;
}

Point Grid::coord(Index node) const noexcept {
    const Offset idx = multi_index(node);
    Point x{0.0, 0.0, 0.0};
    for (int a = 0; a < dim_; ++a) x[a] = origin_[a] + h_ * static_cast<double>(idx[a]);
    return x;
}

std::optional<Index> Grid::shift(Index node, const Offset& delta) const noexcept {
    Offset idx = multi_index(node);
    for (int a = 0; a < kMaxDim; ++a) idx[a] += delta[a];
    if (!in_lattice(idx)) return std::nullopt;
    const Index target = linear_index(idx);
    if (!mask_[target]) return std::nullopt;
    return target;
}

Box Grid::bounds() const noexcept {
    Box box;
    box.dim = dim_;
    for (int a = 0; a < dim_; ++a) {
        box.lo[a] = origin_[a];
        box.hi[a] = origin_[a] + h_ * static_cast<double>(nodes_[a] - 1);
    }
    return box;
}

bool Grid::same_layout(const Grid& other) const noexcept {
    return dim_ == other.dim_ && nodes_ == other.nodes_ && h_ == other.h_ &&
           origin_ == other.origin_ && mask_ == other.mask_;
}

std::shared_ptr<const Grid> Grid::with_mask(const std::function<bool(const Point&)>& keep) const {
    std::vector<std::uint8_t> mask(size_, 0);
    for (Index node = 0; node < size_; ++node) mask[node] = (mask_[node] && keep(coord(node))) ? 1 : 0;
    return std::make_shared<const Grid>(dim_, nodes_, h_, origin_, std::move(mask));
}

GridPtr build_grid(const Box& box, double h) {
    if (!(h > 0.0) || !std::isfinite(h)) fail(ErrorCode::NonPositiveSpacing, "spacing must be positive");
    if (box.dim < 1 || box.dim > kMaxDim) fail(ErrorCode::InvalidArgument, "dimension must be 1..3");
    std::array<long, kMaxDim> nodes{1, 1, 1};
    for (int a = 0; a < box.dim; ++a) {
        const double extent = box.hi[a] - box.lo[a];
        if (!(extent > 0.0)) fail(ErrorCode::EmptyDomain, "box has an empty extent");
        const double cells = extent / h;
        const double rounded = std::round(cells);
        // a few ulps of slack for decimal spacings such as 0.1
        if (rounded < 1.0 ||
            std::abs(cells - rounded) > 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, cells))
            fail(ErrorCode::SpacingMisfit, "spacing does not tile the box extent");
        nodes[a] = static_cast<long>(rounded) + 1;
    }
    return std::make_shared<const Grid>(box.dim, nodes, h, box.lo, std::vector<std::uint8_t>{});
}

GridFunction::GridFunction(GridPtr grid, double fill) : grid_(std::move(grid)) {
    values_.assign(grid_->size(), 0.0);
    for (Index node : grid_->region_nodes()) values_[node] = fill;
}

double GridFunction::max_abs() const noexcept {
    double m = 0.0;
    for (Index node : grid_->region_nodes()) m = std::max(m, std::abs(values_[node]));
    return m;
}

double GridFunction::min_value() const noexcept {
    double m = std::numeric_limits<double>::infinity();
    for (Index node : grid_->region_nodes()) m = std::min(m, values_[node]);
    return m;
}

double GridFunction::max_value() const noexcept {
    double m = -std::numeric_limits<double>::infinity();
    for (Index node : grid_->region_nodes()) m = std::max(m, values_[node]);
    return m;
}

bool GridFunction::all_finite() const noexcept {
    return std::all_of(grid_->region_nodes().begin(), grid_->region_nodes().end(),
                       [&](Index node) { return std::isfinite(values_[node]); });
}

GridFunction GridFunction::operator-() const {
    GridFunction out = *this;
    for (double& v : out.values_) v = -v;
    return out;
}

double sup_distance(const GridFunction& u, const GridFunction& v) {
    if (!u.grid().same_layout(v.grid())) fail(ErrorCode::GridMismatch, "grid functions live on different grids");
    double d = 0.0;
    for (Index node : u.grid().region_nodes()) d = std::max(d, std::abs(u[node] - v[node]));
    return d;
}

double sampled_lipschitz(const GridFunction& u) {
    const Grid& g = u.grid();
    double lip = 0.0;
    for (Index node : g.region_nodes()) {
        for (int a = 0; a < g.dim(); ++a) {
            Offset d{0, 0, 0};
            d[a] = 1;
            if (auto nb = g.shift(node, d)) lip = std::max(lip, std::abs(u[*nb] - u[node]));
        }
    }
    return lip / g.h();
}

} // namespace viscograd
