#pragma once

// Random paths and windows shared by the unit tests and the acceptance run.

#include <cmath>
#include <cstdint>
#include <random>

#include "ydde/coefficients.hpp"
#include "ydde/grid_path.hpp"
#include "ydde/norms.hpp"

#include "oracles.hpp"

namespace draws {

/// Random walk plus a slow sine, sup norm kept near `scale`.
inline ydde::GridPath random_path(std::mt19937_64& rng, double t0, double mesh, std::size_t nodes,
                                  std::size_t dim, double scale = 1.0) {
    std::normal_distribution<double> n01;
    std::uniform_real_distribution<double> u01;
    std::vector<double> v(nodes * dim);
    for (std::size_t c = 0; c < dim; ++c) {
        const double freq = 1.0 + 4.0 * u01(rng);
        const double phase = 6.0 * u01(rng);
        double walk = 0.0;
        for (std::size_t k = 0; k < nodes; ++k) {
            walk += std::sqrt(mesh) * n01(rng);
            const double t = t0 + static_cast<double>(k) * mesh;
            v[k * dim + c] = scale * (0.5 * std::sin(freq * t + phase) + 0.5 * walk);
        }
    }
    return ydde::GridPath(t0, mesh, dim, std::move(v));
}

struct InequalityDraw {
    ydde::GridPath x;
    ydde::GridPath y;
    double r = 0.0;
    double beta = 0.0;
    ydde::Window window;
    std::size_t R = 0;
    std::size_t first = 0;  ///< node of a
    std::size_t last = 0;   ///< node of b
};

/// Path on [0, b] with delay r = R cells and a window [a, b] with a >= r.
inline InequalityDraw inequality_draw(std::mt19937_64& rng, std::size_t dim) {
    std::uniform_int_distribution<std::size_t> cells_r(1, 12), cells_w(1, 24), lead(0, 10);
    std::uniform_real_distribution<double> beta(0.2, 0.9);
    const double mesh = 1.0 / 64.0;
    InequalityDraw d;
    d.R = cells_r(rng);
    d.r = static_cast<double>(d.R) * mesh;
    d.beta = beta(rng);
    d.first = d.R + lead(rng);
    d.last = d.first + cells_w(rng);
    const std::size_t nodes = d.last + 1 + lead(rng);
    d.x = random_path(rng, 0.0, mesh, nodes, dim);
    d.y = random_path(rng, 0.0, mesh, nodes, dim);
    d.window = {static_cast<double>(d.first) * mesh, static_cast<double>(d.last) * mesh};
    return d;
}

struct InequalityTally {
    std::size_t draws = 0;
    std::size_t segment_holder = 0;  ///< failures
    std::size_t segment_norm = 0;
    std::size_t composition = 0;
    std::size_t composition_diff = 0;
    std::size_t pvar_windows = 0;
    std::size_t pvar_mismatch = 0;
    double worst_pvar_gap = 0.0;

    bool clean() const {
        return segment_holder + segment_norm + composition + composition_diff + pvar_mismatch == 0 && draws > 0;
    }
};

inline ydde::CoefficientSet probe_coefficients(std::size_t which) {
    using ydde::Family;
    ydde::FamilyParams p;
    switch (which % 3) {
        case 0:
            p.a = -0.3;
            p.b = 0.2;
            p.sigma = 0.7;
            return ydde::make_builtin(Family::SinDelay, p);
        case 1:
            p.dim = 2;
            p.A = {-0.5, 0.1, 0.0, -0.2};
            p.B = {0.3, 0.0, 0.1, 0.2};
            p.Sigma = {0.4, -0.1, 0.2, 0.6};
            p.c = {0.1, -0.2};
            return ydde::make_builtin(Family::LinearDelay, p);
        default:
            p.a = 0.4;
            p.sigma = 0.8;
            return ydde::make_builtin(Family::ScalarLogisticBounded, p);
    }
}

/// Segment-path inequalities, both composition estimates, and p-variation
/// DP against enumeration, on `draws` random (path, window) pairs.
inline InequalityTally inequality_suite(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    InequalityTally tally;
    const double slack = 1.0 + 1e-12;
    for (std::size_t i = 0; i < n; ++i) {
        const ydde::CoefficientSet coeffs = probe_coefficients(i);
        const InequalityDraw d = inequality_draw(rng, coeffs.dim);
        const ydde::Window full{d.window.a - d.r, d.window.b};

        const double seg = ydde::segment_path_holder(d.x, d.beta, d.r, d.window).seminorm;
        const double whole = ydde::holder_seminorm(d.x, d.beta, full).seminorm;
        if (!(seg <= whole * slack)) ++tally.segment_holder;

        const double seg_norm = oracle::segment_sup(d.x, d.R, d.first, d.last) + seg;
        if (!(seg_norm <= ydde::holder_norm(d.x, d.beta, full) * slack)) ++tally.segment_norm;

        if (!ydde::composition_holder(coeffs, d.x, d.beta, d.r, d.window).holds()) ++tally.composition;
        if (!ydde::composition_difference(coeffs, d.x, d.y, d.beta, d.r, d.window).holds()) ++tally.composition_diff;
        ++tally.draws;
    }

    // Every window of at most 12 nodes on a few short paths.
    for (std::size_t trial = 0; trial < 6; ++trial) {
        const std::size_t dim = 1 + trial % 2;
        const ydde::GridPath x = random_path(rng, 0.0, 1.0 / 16.0, 16, dim);
        const double p = 1.0 + 0.5 * static_cast<double>(trial);
        for (std::size_t a = 0; a + 1 < x.size(); ++a)
            for (std::size_t b = a + 1; b < x.size() && b - a < 12; ++b) {
                const ydde::Window w{x.time(a), x.time(b)};
                const double dp = ydde::pvar_seminorm(x, p, w).seminorm;
                const double ex = oracle::pvar_exhaustive(x, p, a, b);
                const double gap = std::abs(dp - ex) / std::max(1.0, ex);
                tally.worst_pvar_gap = std::max(tally.worst_pvar_gap, gap);
                if (gap > 1e-12) ++tally.pvar_mismatch;
                ++tally.pvar_windows;
            }
    }
    return tally;
}

}  // namespace draws
