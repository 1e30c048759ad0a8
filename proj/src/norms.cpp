#include "ydde/norms.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ydde/error.hpp"
#include "ydde/simd/kernels.hpp"

namespace ydde {

namespace {

void check_beta(double beta) {
    if (!(beta > 0.0 && beta <= 1.0)) throw DomainError("Hölder exponent must lie in (0, 1]");
}

// w[k] = (k h)^-beta for k = 1..n-1; w[0] unused.
std::vector<double> lag_weights(std::size_t n, double mesh, double beta) {
    std::vector<double> w(std::max<std::size_t>(n, 1));
    w[0] = 0.0;
    for (std::size_t k = 1; k < n; ++k) w[k] = std::pow(static_cast<double>(k) * mesh, -beta);
    return w;
}

// Structure-of-arrays copy for multi-dimensional runs; dimension one is
// used in place.
class SoA {
public:
    explicit SoA(const SegmentView& v) {
        const std::size_t d = v.dim();
        if (d == 1) {
            ptrs_.push_back(v.values().data());
            return;
        }
        const std::size_t n = v.nodes();
        storage_.resize(n * d);
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t c = 0; c < d; ++c) storage_[c * n + k] = v.values()[k * d + c];
        for (std::size_t c = 0; c < d; ++c) ptrs_.push_back(storage_.data() + c * n);
    }
    simd::Components comps() const { return ptrs_; }

private:
    std::vector<double> storage_;
    std::vector<const double*> ptrs_;
};

// Hölder scan restricted to lags <= max_lag.
NormReport holder_scan(const SegmentView& nodes, double beta, std::size_t max_lag) {
    check_beta(beta);
    NormReport rep{0.0, {0, 0}, beta};
    const std::size_t n = nodes.nodes();
    if (n < 2) return rep;
    const auto w = lag_weights(std::min(n, max_lag + 1), nodes.mesh(), beta);
    const SoA soa(nodes);
    for (std::size_t s = 0; s + 1 < n; ++s) {
        const std::size_t len = std::min(n - s, max_lag + 1);
        const simd::ArgMax am = simd::max_weighted_increment(soa.comps(), s, len, w.data());
        if (am.value > rep.seminorm) {
            rep.seminorm = am.value;
            rep.witness = {s, s + am.offset};
        }
    }
    return rep;
}

double euclid_diff(std::span<const double> a, std::span<const double> b) {
    double sq = 0.0;
    for (std::size_t c = 0; c < a.size(); ++c) {
        const double d = a[c] - b[c];
        sq += d * d;
    }
    return std::sqrt(sq);
}

}  // namespace

NormReport holder_seminorm(const SegmentView& nodes, double beta) {
    return holder_scan(nodes, beta, nodes.nodes());
}

NormReport holder_seminorm(const GridPath& path, double beta, const Window& window) {
    const NodeRange r = path.range_of(window);
    NormReport rep = holder_seminorm(path.view(r), beta);
    for (auto& i : rep.witness) i += r.first;
    return rep;
}

double sup_norm(const GridPath& path, const Window& window) {
    const NodeRange r = path.range_of(window);
    return path.view(r).sup_norm();
}

double holder_norm(const SegmentView& nodes, double beta) {
    return nodes.sup_norm() + holder_seminorm(nodes, beta).seminorm;
}

double holder_norm(const GridPath& path, double beta, const Window& window) {
    return holder_norm(path.view(path.range_of(window)), beta);
}

NormReport pvar_seminorm(const GridPath& path, double p, const Window& window) {
    if (!(p >= 1.0)) throw DomainError("p-variation requires p >= 1");
    const NodeRange r = path.range_of(window);
    const std::size_t n = r.count();
    // best[j]: optimal sum over partitions of [a, t_j] ending at t_j.
    std::vector<double> best(n, 0.0);
    std::vector<std::size_t> prev(n, 0);
    for (std::size_t j = 1; j < n; ++j) {
        double bj = -1.0;
        std::size_t arg = 0;
        const auto xj = path.at(r.first + j);
        for (std::size_t i = 0; i < j; ++i) {
            const double v = best[i] + std::pow(euclid_diff(xj, path.at(r.first + i)), p);
            if (v > bj) {
                bj = v;
                arg = i;
            }
        }
        best[j] = bj;
        prev[j] = arg;
    }
    NormReport rep{std::pow(best[n - 1], 1.0 / p), {}, p};
    for (std::size_t j = n - 1;; j = prev[j]) {
        rep.witness.push_back(r.first + j);
        if (j == 0) break;
    }
    std::reverse(rep.witness.begin(), rep.witness.end());
    return rep;
}

NormReport segment_path_holder(const GridPath& path, double beta, double r, const Window& window) {
    // sup_{s<t} max_u ||x(t+u) - x(s+u)|| / (t-s)^beta ranges over exactly the
    // node pairs (j, j+k) of [a-r, b] with lag k <= (b-a)/h, so it is a
    // lag-limited Hölder scan of the enlarged window.
    const std::size_t cells = cells_in(r, path.mesh(), "delay");
    if (!(r > 0.0)) throw DomainError("delay must be positive");
    const NodeRange win = path.range_of(window);
    if (win.first < cells) throw DomainError("segment precedes history");
    const NodeRange big{win.first - cells, win.last};
    NormReport scan = holder_scan(path.view(big), beta, win.last - win.first);
    NormReport rep{scan.seminorm, {}, beta};
    const std::size_t j = big.first + scan.witness[0];
    const std::size_t k = scan.witness[1] - scan.witness[0];
    const std::size_t s = std::max(win.first, j);
    rep.witness = {s, s + k, j};
    return rep;
}

double counterexample_lower_bound(double beta, double p, std::size_t n) {
    return std::pow(static_cast<double>(n), (1.0 - beta * p) / p);
}

double counterexample_growth(double beta, double p, std::size_t n) {
    check_beta(beta);
    if (!(p >= 1.0)) throw DomainError("p-variation requires p >= 1");
    if (!(beta * p < 1.0))
        throw DomainError("counterexample needs beta * p < 1 (otherwise x_. has finite p-variation)");
    if (n == 0) throw DomainError("partition size must be positive");
    const double h = 1.0 / static_cast<double>(n);
    const auto x = GridPath::from_function(-1.0, h, 2 * n + 1, 1, [beta](double t, std::span<double> v) {
        v[0] = std::pow(std::abs(t), beta);
    });
    // x_{i/n} spans nodes i..i+n; consecutive segments differ by one node.
    const auto& v = x.values();
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double sup = 0.0;
        for (std::size_t j = i; j <= i + n; ++j) sup = std::max(sup, std::abs(v[j + 1] - v[j]));
        sum += std::pow(sup, p);
    }
    return std::pow(sum, 1.0 / p);
}

}  // namespace ydde
