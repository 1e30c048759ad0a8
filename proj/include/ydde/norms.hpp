#pragma once

// Grid-restricted Hölder and p-variation seminorms.
//
// All suprema run over grid nodes only, so each value is a lower bound of
// the continuum seminorm of any path interpolating the samples. Inequalities
// between these quantities hold exactly as they do in the continuum, since
// each one is a restricted supremum of the same functional.

#include <cstddef>
#include <vector>

#include "ydde/grid_path.hpp"

namespace ydde {

struct NormReport {
    double seminorm = 0.0;
    /// Absolute node indices of the maximizer: (s, t) for Hölder scans,
    /// (s, t, j) for the segment-valued scan with j the node of the
    /// maximizing shifted pair, the whole partition for p-variation.
    std::vector<std::size_t> witness;
    /// beta for Hölder seminorms, p for p-variation.
    double exponent = 0.0;
};

/// max over node pairs s < t in the window of ||x(t) - x(s)|| / (t - s)^beta.
NormReport holder_seminorm(const GridPath& path, double beta, const Window& window);

/// Same scan over an arbitrary contiguous node run (segments, sub-windows).
/// Witness indices are relative to the view.
NormReport holder_seminorm(const SegmentView& nodes, double beta);

/// sup over nodes of the Euclidean norm.
double sup_norm(const GridPath& path, const Window& window);

/// ||x||_{inf,beta} = sup norm + Hölder seminorm over the run.
double holder_norm(const SegmentView& nodes, double beta);
double holder_norm(const GridPath& path, double beta, const Window& window);

/// Exact supremum over partitions with grid-node points, by dynamic
/// programming over nodes. Returns the p-th root and the optimal partition.
NormReport pvar_seminorm(const GridPath& path, double p, const Window& window);

/// Hölder seminorm of the segment-valued map t -> x_t on [a, b]:
/// max over grid s < t of ||x_t - x_s||_{inf,[-r,0]} / (t - s)^beta.
NormReport segment_path_holder(const GridPath& path, double beta, double r, const Window& window);

/// For x(t) = |t|^beta on [-1, 1] and the uniform n-partition of [0, 1],
/// (sum_i ||x_{(i+1)/n} - x_{i/n}||^p_{inf,[-1,0]})^{1/p}. Requires beta * p < 1.
double counterexample_growth(double beta, double p, std::size_t n);

/// n^{(1 - beta p) / p}, the lower bound the partition sum never falls below.
double counterexample_lower_bound(double beta, double p, std::size_t n);

}  // namespace ydde
