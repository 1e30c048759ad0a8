#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace ydde {

/// Closed time window [a, b]. Endpoints must be grid nodes of whatever path
/// the window is applied to.
struct Window {
    double a = 0.0;
    double b = 0.0;
};

/// Inclusive range of node indices.
struct NodeRange {
    std::size_t first = 0;
    std::size_t last = 0;

    std::size_t count() const noexcept { return last - first + 1; }
};

/// Non-owning view of a delay segment x_t, i.e. x restricted to [t - r, t]
/// and re-indexed to u in [-r, 0]. Node j sits at u = -r + j * mesh.
/// Values are row-major, nodes x dim.
class SegmentView {
public:
    SegmentView() = default;
    SegmentView(std::span<const double> values, std::size_t dim, double mesh)
        : values_(values), dim_(dim), mesh_(mesh) {}

    std::size_t dim() const noexcept { return dim_; }
    std::size_t nodes() const noexcept { return dim_ == 0 ? 0 : values_.size() / dim_; }
    double mesh() const noexcept { return mesh_; }
    double delay() const noexcept { return mesh_ * static_cast<double>(nodes() - 1); }

    std::span<const double> at(std::size_t j) const { return values_.subspan(j * dim_, dim_); }
    /// x_t(0) = x(t)
    std::span<const double> head() const { return at(nodes() - 1); }
    /// x_t(-r) = x(t - r)
    std::span<const double> tail() const { return at(0); }
    std::span<const double> values() const noexcept { return values_; }

    /// max over nodes of the Euclidean norm
    double sup_norm() const;

private:
    std::span<const double> values_;
    std::size_t dim_ = 0;
    double mesh_ = 0.0;
};

/// Owning segment. Invariant: nodes == delay / mesh + 1.
class Segment {
public:
    Segment() = default;
    Segment(double delay, double mesh, std::size_t dim, std::vector<double> values);

    /// Segment with every node equal to `value`.
    static Segment constant(double delay, double mesh, std::span<const double> value);
    /// Segment with node u set to fn(u).
    static Segment from_function(double delay, double mesh, std::size_t dim,
                                 const std::function<void(double, std::span<double>)>& fn);

    double delay() const noexcept { return delay_; }
    double mesh() const noexcept { return mesh_; }
    std::size_t dim() const noexcept { return dim_; }
    std::size_t nodes() const noexcept { return values_.size() / dim_; }
    double u(std::size_t j) const noexcept { return -delay_ + static_cast<double>(j) * mesh_; }

    std::span<const double> at(std::size_t j) const { return view().at(j); }
    const std::vector<double>& values() const noexcept { return values_; }
    SegmentView view() const { return {values_, dim_, mesh_}; }

private:
    double delay_ = 0.0;
    double mesh_ = 0.0;
    std::size_t dim_ = 1;
    std::vector<double> values_;
};

/// A d-dimensional path sampled on the uniform grid t0 + k * mesh,
/// k = 0..size()-1. Immutable once built.
class GridPath {
public:
    GridPath() = default;
    GridPath(double t0, double mesh, std::size_t dim, std::vector<double> values);

    static GridPath from_function(double t0, double mesh, std::size_t nodes, std::size_t dim,
                                  const std::function<void(double, std::span<double>)>& fn);
    static GridPath scalar(double t0, double mesh, std::vector<double> values) {
        return GridPath(t0, mesh, 1, std::move(values));
    }

    double t0() const noexcept { return t0_; }
    double mesh() const noexcept { return mesh_; }
    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return values_.size() / dim_; }
    double time(std::size_t k) const noexcept { return t0_ + static_cast<double>(k) * mesh_; }
    double t_end() const noexcept { return time(size() - 1); }

    std::span<const double> at(std::size_t k) const {
        return std::span<const double>(values_).subspan(k * dim_, dim_);
    }
    const std::vector<double>& values() const noexcept { return values_; }

    /// Node index of time t. Throws DomainError if t is off-grid or outside the path.
    std::size_t index_of(double t) const;
    /// Whether t is (to rounding) a grid node inside the path.
    bool on_grid(double t) const noexcept;
    NodeRange range_of(const Window& w) const;

    /// Nodes first..last as a new path.
    GridPath slice(NodeRange r) const;
    /// View of nodes first..last as a segment-shaped view.
    SegmentView view(NodeRange r) const {
        return {std::span<const double>(values_).subspan(r.first * dim_, r.count() * dim_), dim_,
                mesh_};
    }
    /// Component c as a contiguous array.
    std::vector<double> component(std::size_t c) const;

private:
    double t0_ = 0.0;
    double mesh_ = 1.0;
    std::size_t dim_ = 1;
    std::vector<double> values_;
};

/// x_t re-indexed to [-r, 0]. Requires t and t - r to be grid nodes with t - r >= t0.
Segment segment(const GridPath& path, double t, double r);

/// Number of mesh cells in `length`, requiring an exact multiple.
std::size_t cells_in(double length, double mesh, const char* what);

/// Pointwise difference of two paths on the same grid.
GridPath difference(const GridPath& x, const GridPath& y);

}  // namespace ydde
