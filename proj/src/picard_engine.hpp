#pragma once

// Window-by-window Picard iteration shared by the nonlinear solver and the
// linearized (sensitivity) equation.
//
// Solution buffers hold nodes of [-r, T] row-major; solution node j sits at
// time -r + j h, so driver node k corresponds to solution node k + R with R
// the number of delay cells.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "ydde/grid_path.hpp"
#include "ydde/solver.hpp"

namespace ydde::detail {

/// Integrand pair at a window node. `node` is the solution index of the
/// left point, `seg` the iterate's segment ending there.
using Integrand = std::function<void(std::size_t node, const SegmentView& seg, std::span<double> drift,
                                     std::span<double> diffusion)>;

struct EngineSettings {
    double beta = 0.0;  ///< exponent of the (inf, beta) norm used for residuals
    double mu = 0.0;
    double tol = 0.0;   ///< absolute residual threshold
    std::size_t max_iters = 0;
    PicardInit init = PicardInit::Constant;
    const std::vector<double>* oracle = nullptr;  ///< solution buffer for PerturbedOracle
    bool check_ball = false;
};

/// One left-point sweep over the m cells after the history block of `cur`
/// (R + m + 1 nodes). `next` gets the history block unchanged and the
/// running sums after it; `cur == next` performs explicit Euler in place.
/// `w` points at the driver value of the window start; `node0` is the
/// solution index of the window start.
void sweep(const Integrand& F, const double* cur, double* next, std::size_t dim, std::size_t R, std::size_t m,
           double mesh, const double* w, std::size_t node0);

/// Solves the windows between consecutive driver nodes of `window_nodes`
/// into `buffer` (history already filled); `w` is the driver from node 0.
/// A window that misses tolerance is split once at its midpoint; if a half
/// still fails, ConvergenceError is thrown.
std::vector<WindowStats> solve_partition(const Integrand& F, std::vector<double>& buffer, std::size_t dim,
                                         std::size_t R, double mesh, const double* w,
                                         const std::vector<std::size_t>& window_nodes,
                                         const EngineSettings& settings);

}  // namespace ydde::detail
