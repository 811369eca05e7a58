#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace viscograd {

inline constexpr int kMaxDim = 3;

using Index = std::size_t;
using Point = std::array<double, kMaxDim>;
using Offset = std::array<long, kMaxDim>;

/// Axis-aligned box [lo, hi] in 1 to 3 dimensions. Unused axes are zero.
struct Box {
    int dim = 1;
    Point lo{};
    Point hi{};

    static Box interval(double a, double b);
    static Box rect(double x0, double x1, double y0, double y1);
    static Box cube(double lo, double hi, int dim);
};

/// Uniform rectangular lattice over a box, with a region mask.
///
/// Nodes are numbered in raster order with axis 0 fastest. A node is in the
/// region when its mask bit is set; a region node is interior when all 2n
/// axis neighbours exist and are in the region, and boundary otherwise.
class Grid {
public:
    Grid(int dim, std::array<long, kMaxDim> nodes, double h, Point origin,
         std::vector<std::uint8_t> mask);

    int dim() const noexcept { return dim_; }
    double h() const noexcept { return h_; }
    const Point& origin() const noexcept { return origin_; }
    long nodes(int axis) const noexcept { return nodes_[axis]; }
    const std::array<long, kMaxDim>& shape() const noexcept { return nodes_; }
    Index size() const noexcept { return size_; }
    Index stride(int axis) const noexcept { return strides_[axis]; }
    /// Node volume h^n.
    double cell_volume() const noexcept;

    Offset multi_index(Index node) const noexcept;
    Index linear_index(const Offset& idx) const noexcept;
    bool in_lattice(const Offset& idx) const noexcept;
    Point coord(Index node) const noexcept;

    bool in_region(Index node) const noexcept { return mask_[node] != 0; }
    bool is_interior(Index node) const noexcept { return kind_[node] == kInterior; }
    bool is_boundary(Index node) const noexcept { return kind_[node] == kBoundary; }

    std::span<const Index> interior_nodes() const noexcept { return interior_; }
    std::span<const Index> boundary_nodes() const noexcept { return boundary_; }
    std::span<const Index> region_nodes() const noexcept { return region_; }
    std::span<const std::uint8_t> mask() const noexcept { return mask_; }

    /// Node at `node + delta` if it is in the lattice and in the region.
    std::optional<Index> shift(Index node, const Offset& delta) const noexcept;

    /// True when every lattice node is in the region.
    bool full_box() const noexcept { return region_.size() == size_; }
    Box bounds() const noexcept;

    bool same_layout(const Grid& other) const noexcept;

    /// Same lattice with the region restricted to nodes where `keep` holds.
    std::shared_ptr<const Grid> with_mask(const std::function<bool(const Point&)>& keep) const;

private:
    static constexpr std::uint8_t kOutside = 0, kInterior = 1, kBoundary = 2;

    int dim_;
    std::array<long, kMaxDim> nodes_;
    std::array<Index, kMaxDim> strides_{};
    Index size_;
    double h_;
    Point origin_;
    std::vector<std::uint8_t> mask_;
    std::vector<std::uint8_t> kind_;
    std::vector<Index> interior_;
    std::vector<Index> boundary_;
    std::vector<Index> region_;
};

using GridPtr = std::shared_ptr<const Grid>;

/// Lattice covering `box` with spacing h on every axis.
///
/// Throws NonPositiveSpacing when h <= 0, EmptyDomain for a degenerate box and
/// SpacingMisfit when h does not tile an extent.
GridPtr build_grid(const Box& box, double h);

/// Real values on the lattice of a grid. Values outside the region are kept at
/// zero and ignored by every operation.
class GridFunction {
public:
    GridFunction() = default;
    explicit GridFunction(GridPtr grid, double fill = 0.0);

    template <class F>
    static GridFunction sample(GridPtr grid, F&& f) {
        GridFunction u(std::move(grid));
        for (Index node : u.grid().region_nodes()) u.values_[node] = f(u.grid().coord(node));
        return u;
    }

    const Grid& grid() const noexcept { return *grid_; }
    const GridPtr& grid_ptr() const noexcept { return grid_; }

    double operator[](Index node) const noexcept { return values_[node]; }
    double& operator[](Index node) noexcept { return values_[node]; }
    std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }

    bool boundary_pinned() const noexcept { return boundary_pinned_; }
    void set_boundary_pinned(bool pinned) noexcept { boundary_pinned_ = pinned; }

    double max_abs() const noexcept;
    double min_value() const noexcept;
    double max_value() const noexcept;
    bool all_finite() const noexcept;

    GridFunction operator-() const;

private:
    GridPtr grid_;
    std::vector<double> values_;
    bool boundary_pinned_ = false;
};

/// max over region nodes of |u - v|. Throws GridMismatch for different layouts.
double sup_distance(const GridFunction& u, const GridFunction& v);

/// Largest adjacent-node difference divided by h (a sampled Lipschitz constant).
double sampled_lipschitz(const GridFunction& u);

} // namespace viscograd
