#include "picard_engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>
#include <utility>

#include "ydde/error.hpp"
#include "ydde/norms.hpp"

namespace ydde::detail {

void sweep(const Integrand& F, const double* cur, double* next, std::size_t dim, std::size_t R, std::size_t m,
           double mesh, const double* w, std::size_t node0) {
    if (cur != next) std::memcpy(next, cur, (R + 1) * dim * sizeof(double));
    std::vector<double> acc(cur + R * dim, cur + (R + 1) * dim);
    std::vector<double> drift(dim), diffusion(dim);
    for (std::size_t k = 0; k < m; ++k) {
        const SegmentView seg(std::span<const double>(cur + k * dim, (R + 1) * dim), dim, mesh);
        F(node0 + k, seg, drift, diffusion);
        const double dw = w[k + 1] - w[k];
        double* out = next + (R + k + 1) * dim;
        for (std::size_t c = 0; c < dim; ++c) {
            acc[c] = acc[c] + drift[c] * mesh + diffusion[c] * dw;
            out[c] = acc[c];
        }
    }
}

namespace {

struct Attempt {
    WindowStats stats;
    bool converged = false;
};

// Driver nodes [p, q]; solution nodes [p, p + R + m] hold [t_i - r, t_{i+1}].
Attempt iterate_window(const Integrand& F, std::vector<double>& buffer, std::size_t dim, std::size_t R,
                       double mesh, const double* w, std::size_t p, std::size_t q, const EngineSettings& s) {
    const std::size_t m = q - p;
    const std::size_t nodes = R + m + 1;
    Attempt at;
    at.stats.t_start = static_cast<double>(p) * mesh;
    at.stats.t_end = static_cast<double>(q) * mesh;

    std::vector<double> cur(buffer.begin() + static_cast<std::ptrdiff_t>(p * dim),
                            buffer.begin() + static_cast<std::ptrdiff_t>((p + nodes) * dim));
    const double* start = cur.data() + R * dim;
    for (std::size_t k = 1; k <= m; ++k) {
        double* x = cur.data() + (R + k) * dim;
        for (std::size_t c = 0; c < dim; ++c) {
            switch (s.init) {
                case PicardInit::Constant: x[c] = start[c]; break;
                case PicardInit::LinearExtension:
                    x[c] = start[c] + static_cast<double>(k) * (start[c] - (start - dim)[c]);
                    break;
                case PicardInit::PerturbedOracle:
                    x[c] = (*s.oracle)[(p + R + k) * dim + c] +
                           1e-2 * static_cast<double>(k) / static_cast<double>(m);
                    break;
            }
        }
    }

    const auto norm_of = [&](const std::vector<double>& v, std::size_t first, std::size_t count) {
        return holder_norm(SegmentView(std::span<const double>(v).subspan(first * dim, count * dim), dim, mesh),
                           s.beta);
    };
    if (s.check_ball) {
        const double hist = norm_of(cur, 0, R + 1);
        at.stats.ball_radius = (hist + s.mu) / (1.0 - s.mu);
        at.stats.max_iterate_norm = norm_of(cur, 0, nodes);
    }

    std::vector<double> next(cur.size());
    std::vector<double> delta((m + 1) * dim);
    double prev = 0.0;
    for (std::size_t it = 1; it <= s.max_iters; ++it) {
        sweep(F, cur.data(), next.data(), dim, R, m, mesh, w + p, p + R);
        // The difference vanishes on the history block, and every pair
        // straddling t_i is dominated by the pair anchored at t_i, so the
        // norm over [t_i, t_{i+1}] equals the one over [t_i - r, t_{i+1}].
        double scale = 0.0;
        for (std::size_t i = 0; i < delta.size(); ++i) {
            delta[i] = next[R * dim + i] - cur[R * dim + i];
            scale = std::max(scale, std::abs(next[R * dim + i]));
        }
        const double res = norm_of(delta, 0, m + 1);
        at.stats.residual_history.push_back(res);
        at.stats.residual = res;
        at.stats.iterations = it;
        if (it >= 2 && prev > 1e-12 * std::max(1.0, scale)) at.stats.max_ratio = std::max(at.stats.max_ratio, res / prev);
        prev = res;
        if (s.check_ball) {
            const double nrm = norm_of(next, 0, nodes);
            at.stats.max_iterate_norm = std::max(at.stats.max_iterate_norm, nrm);
            if (nrm > at.stats.ball_radius * (1.0 + 1e-12)) ++at.stats.ball_violations;
        }
        cur.swap(next);
        if (res <= s.tol) {
            std::copy(cur.begin() + static_cast<std::ptrdiff_t>(R * dim), cur.end(),
                      buffer.begin() + static_cast<std::ptrdiff_t>((p + R) * dim));
            at.converged = true;
            return at;
        }
    }
    return at;
}

}  // namespace

std::vector<WindowStats> solve_partition(const Integrand& F, std::vector<double>& buffer, std::size_t dim,
                                         std::size_t R, double mesh, const double* w,
                                         const std::vector<std::size_t>& window_nodes,
                                         const EngineSettings& settings) {
    std::vector<WindowStats> out;
    for (std::size_t i = 0; i + 1 < window_nodes.size(); ++i) {
        const std::size_t p = window_nodes[i];
        const std::size_t q = window_nodes[i + 1];
        Attempt at = iterate_window(F, buffer, dim, R, mesh, w, p, q, settings);
        if (at.converged) {
            out.push_back(std::move(at.stats));
            continue;
        }
        if (q - p < 2)
            throw ConvergenceError("Picard iteration did not converge", at.stats.t_start, at.stats.t_end,
                                   at.stats.residual_history);
        const std::size_t mid = p + (q - p) / 2;
        for (auto [a, b] : {std::pair{p, mid}, std::pair{mid, q}}) {
            Attempt half = iterate_window(F, buffer, dim, R, mesh, w, a, b, settings);
            if (!half.converged)
                throw ConvergenceError("Picard iteration did not converge after bisecting the window",
                                       half.stats.t_start, half.stats.t_end, half.stats.residual_history);
            half.stats.bisected = true;
            out.push_back(std::move(half.stats));
        }
    }
    return out;
}

}  // namespace ydde::detail
