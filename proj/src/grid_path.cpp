#include "ydde/grid_path.hpp"

#include <cmath>
#include <string>

#include "ydde/error.hpp"

namespace ydde {

namespace {

// Grid membership tolerance, in units of the mesh.
constexpr double kGridSnap = 1e-7;

double euclid(std::span<const double> v) {
    double sq = 0.0;
    for (double c : v) sq += c * c;
    return std::sqrt(sq);
}

}  // namespace

double SegmentView::sup_norm() const {
    double m = 0.0;
    for (std::size_t j = 0; j < nodes(); ++j) m = std::max(m, euclid(at(j)));
    return m;
}

std::size_t cells_in(double length, double mesh, const char* what) {
    if (!(mesh > 0.0)) throw DomainError("mesh must be positive");
    if (length < 0.0) throw DomainError(std::string(what) + " must be nonnegative");
    const double q = length / mesh;
    const double k = std::round(q);
    if (std::abs(q - k) > kGridSnap * std::max(1.0, k))
        throw DomainError(std::string(what) + " is not an integer multiple of the mesh");
    return static_cast<std::size_t>(k);
}

Segment::Segment(double delay, double mesh, std::size_t dim, std::vector<double> values)
    : delay_(delay), mesh_(mesh), dim_(dim), values_(std::move(values)) {
    if (dim_ == 0) throw DomainError("segment dimension must be positive");
    if (!(delay_ > 0.0)) throw DomainError("delay must be positive");
    const std::size_t cells = cells_in(delay_, mesh_, "delay");
    if (values_.size() != (cells + 1) * dim_)
        throw DomainError("segment must hold delay/mesh + 1 nodes");
}

Segment Segment::constant(double delay, double mesh, std::span<const double> value) {
    const std::size_t n = cells_in(delay, mesh, "delay") + 1;
    std::vector<double> v;
    v.reserve(n * value.size());
    for (std::size_t j = 0; j < n; ++j) v.insert(v.end(), value.begin(), value.end());
    return Segment(delay, mesh, value.size(), std::move(v));
}

Segment Segment::from_function(double delay, double mesh, std::size_t dim,
                               const std::function<void(double, std::span<double>)>& fn) {
    const std::size_t n = cells_in(delay, mesh, "delay") + 1;
    std::vector<double> v(n * dim);
    for (std::size_t j = 0; j < n; ++j)
        fn(-delay + static_cast<double>(j) * mesh, std::span<double>(v).subspan(j * dim, dim));
    return Segment(delay, mesh, dim, std::move(v));
}

GridPath::GridPath(double t0, double mesh, std::size_t dim, std::vector<double> values)
    : t0_(t0), mesh_(mesh), dim_(dim), values_(std::move(values)) {
    if (dim_ == 0) throw DomainError("path dimension must be positive");
    if (!(mesh_ > 0.0) || !std::isfinite(mesh_)) throw DomainError("mesh must be positive");
    if (values_.empty()) throw DomainError("path must have at least one node");
    if (values_.size() % dim_ != 0) throw DomainError("path values are not a whole number of nodes");
}

GridPath GridPath::from_function(double t0, double mesh, std::size_t nodes, std::size_t dim,
                                 const std::function<void(double, std::span<double>)>& fn) {
    std::vector<double> v(nodes * dim);
    for (std::size_t k = 0; k < nodes; ++k)
        fn(t0 + static_cast<double>(k) * mesh, std::span<double>(v).subspan(k * dim, dim));
    return GridPath(t0, mesh, dim, std::move(v));
}

bool GridPath::on_grid(double t) const noexcept {
    const double q = (t - t0_) / mesh_;
    const double k = std::round(q);
    return k >= 0.0 && k <= static_cast<double>(size() - 1) &&
           std::abs(q - k) <= kGridSnap * std::max(1.0, k);
}

std::size_t GridPath::index_of(double t) const {
    const double q = (t - t0_) / mesh_;
    const double k = std::round(q);
    if (k < 0.0 || k > static_cast<double>(size() - 1))
        throw DomainError("time " + std::to_string(t) + " lies outside the path");
    if (std::abs(q - k) > kGridSnap * std::max(1.0, k))
        throw DomainError("time " + std::to_string(t) + " is not a grid node");
    return static_cast<std::size_t>(k);
}

NodeRange GridPath::range_of(const Window& w) const {
    if (!(w.a < w.b)) throw DomainError("window must satisfy a < b");
    const NodeRange r{index_of(w.a), index_of(w.b)};
    if (r.first >= r.last) throw DomainError("window is empty on this grid");
    return r;
}

GridPath GridPath::slice(NodeRange r) const {
    if (r.last >= size() || r.first > r.last) throw DomainError("slice outside path");
    std::vector<double> v(values_.begin() + static_cast<std::ptrdiff_t>(r.first * dim_),
                          values_.begin() + static_cast<std::ptrdiff_t>((r.last + 1) * dim_));
    return GridPath(time(r.first), mesh_, dim_, std::move(v));
}

std::vector<double> GridPath::component(std::size_t c) const {
    std::vector<double> out(size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = values_[k * dim_ + c];
    return out;
}

Segment segment(const GridPath& path, double t, double r) {
    if (!(r > 0.0)) throw DomainError("delay must be positive");
    const std::size_t cells = cells_in(r, path.mesh(), "delay");
    const std::size_t k = path.index_of(t);
    if (k < cells) throw DomainError("segment precedes history");
    const SegmentView v = path.view({k - cells, k});
    return Segment(r, path.mesh(), path.dim(), std::vector<double>(v.values().begin(), v.values().end()));
}

GridPath difference(const GridPath& x, const GridPath& y) {
    if (x.size() != y.size() || x.dim() != y.dim() || x.mesh() != y.mesh() ||
        std::abs(x.t0() - y.t0()) > kGridSnap * x.mesh())
        throw DomainError("paths live on different grids");
    std::vector<double> v(x.values().size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = x.values()[i] - y.values()[i];
    return GridPath(x.t0(), x.mesh(), x.dim(), std::move(v));
}

}  // namespace ydde
