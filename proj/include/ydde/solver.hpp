#pragma once

// Pathwise solver for dx(t) = f(x_t) dt + g(x_t) dw(t) on [0, T] with
// x_0 = eta on [-r, 0], w a nu-Hölder driver with nu > 1/2.
//
// The horizon is cut into greedy windows [t_i, t_{i+1}] on which
//   (t_{i+1} - t_i)^{1-beta} + (t_{i+1} - t_i)^{nu-beta} |||w|||_{nu,[t_i,t_{i+1}]} <= mu / C,
// which makes the integral map F a contraction in the (inf, beta) norm on
// each window. Each window is solved by Picard iteration of F and the
// pieces are concatenated (method of steps).
//
// On the grid, F uses left-point sums for both integrals, so F(x) at node k
// depends on x only at nodes before k. Picard on a window of m cells is
// therefore exact after at most m + 1 sweeps, and its fixed point is the
// explicit Euler path.

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

#include "ydde/coefficients.hpp"
#include "ydde/grid_path.hpp"
#include "ydde/young.hpp"

namespace ydde {

struct SolverConfig {
    double beta = 0.35;
    double nu = 0.7;
    double mu = 0.25;
    double mesh = 1.0 / 1024.0;
    double T = 1.0;
    double r = 0.25;
    /// Picard stops once the (inf, beta) grid norm of successive iterates is <= picard_tol.
    double picard_tol = 1e-10;
    std::size_t picard_max_iters = 200;
    /// Resolution of stopping times; a positive multiple of mesh, 0 means mesh.
    double bisect_tol = 0.0;

    std::size_t cells_T() const;
    std::size_t cells_r() const;
    /// Stopping-time resolution in cells.
    std::size_t stride() const;
    /// 1/2 < nu <= 1, 0 < beta < nu, 0 < mu < 1/2, grid alignment of r, T, bisect_tol.
    void validate() const;
};

SolverConfig solver_config_from_json(const nlohmann::json& j, SolverConfig base = {});
nlohmann::json to_json(const SolverConfig& c);

/// Constants of the contraction argument for a coefficient set.
struct ContractionConstants {
    YoungConstants young;
    double Lprime = 0.0;  ///< max{L_f, ||f(0)||}
    double C = 0.0;       ///< 2 (||g(0)|| + L' + L_g (K + 1))
    double L_f = 0.0;
    double L_g = 0.0;
    double g0 = 0.0;
    double delta = 1.0;
    std::function<double(double)> L_M;

    /// C'(dt) = [1 + dt^beta] (||g(0)|| + L_g + L_g K dt^beta + L')
    double Cprime(double dt) const;
    /// L(dt, M) = L_f + L_g + L_g K' dt^beta + K' L_M(M) M^delta dt^{delta beta}
    double L(double dt, double M) const;
};

/// Throws DomainError when the Young condition fails or C == 0 ("C must be
/// positive to fix mu < C").
ContractionConstants compute_contraction_constants(const CoefficientSet& coeffs, const SolverConfig& config);

/// Stopping times t_0 = 0 < t_1 < ... on the driver grid.
struct GreedyPartition {
    std::vector<double> times;
    std::vector<std::size_t> nodes;  ///< driver node index of each time
    /// phi(t_{i+1} - t_i) for each window, where
    /// phi = dt^{1-beta} + dt^{nu-beta} |||w|||_{nu,window}.
    std::vector<double> residuals;
    /// phi one resolution step past each stopping time (> mu/C by
    /// construction); NaN for the final window.
    std::vector<double> overshoots;
    bool final_clamped = true;  ///< last time is T, not a stopping time
    bool degenerate = false;    ///< single window because C == 0
    double C = 0.0;
    double mu = 0.0;
    double beta = 0.0;
    double nu = 0.0;
    std::size_t N = 0;          ///< stopping times in (0, T]

    double target() const noexcept { return degenerate ? 0.0 : mu / C; }
    std::size_t windows() const noexcept { return times.size() - 1; }
    /// Stopping times in (0, t], counted on driver nodes.
    std::size_t N_at_node(std::size_t node) const;
};

/// dt^{1-beta} + dt^{nu-beta} * seminorm
double window_phi(double dt, double seminorm, double beta, double nu);

/// Greedy windows: from t_i, the largest node t <= T (on the bisect_tol
/// sub-grid) with phi(t - t_i) <= mu / C. Throws DomainError("refine mesh or
/// increase mu") when even one step exceeds mu / C.
GreedyPartition greedy_partition(const GridPath& omega, const SolverConfig& config, double C);
/// Same with an explicit exponent in place of config.beta and explicit mu.
GreedyPartition greedy_partition(const GridPath& omega, const SolverConfig& config, double C, double beta,
                                 double mu);
/// One window spanning [0, T]; used when C = 0 and every window contracts.
GreedyPartition degenerate_partition(const SolverConfig& config, double mu);

/// 2^{k-1} (C/mu)^k (T^{k(1-beta)} + T^{k(nu-beta)} |||w|||^k_{nu,[0,T]}), k = ceil(1/(nu-beta)).
double stopping_count_bound(const GreedyPartition& p, const GridPath& omega, double T);

/// F(x) on [t_i - r, t_{i+1}]: unchanged on the history part, and
/// x(t_i) + int f(x_s) ds + int g(x_s) dw(s) on the window, both integrals as
/// left-point sums. `x` starts at t_i - r and must agree with `history` there.
GridPath map_F(const GridPath& x, const CoefficientSet& coeffs, const GridPath& omega, const Window& window,
               const Segment& history);

enum class PicardInit { Constant, LinearExtension, PerturbedOracle };

struct WindowStats {
    double t_start = 0.0;
    double t_end = 0.0;
    std::size_t iterations = 0;
    double residual = 0.0;              ///< last ||F(x) - x||_{inf,beta}
    std::vector<double> residual_history;
    double max_ratio = 0.0;             ///< max successive residual ratio
    double ball_radius = 0.0;           ///< R_i, 0 when not checked
    double max_iterate_norm = 0.0;
    std::size_t ball_violations = 0;
    bool bisected = false;
};

struct SolveReport {
    GridPath solution;  ///< on [-r, T]
    GreedyPartition partition;
    std::vector<WindowStats> windows;
    double C = 0.0;
    std::size_t ball_violations = 0;
    double nu_seminorm = 0.0;  ///< grid nu-seminorm of the solution on [0, T] (diagnostic)
    std::vector<std::string> warnings;
    double wall_seconds = 0.0;
};

SolveReport picard_solve(const CoefficientSet& coeffs, const Segment& eta, const GridPath& omega,
                         const SolverConfig& config, PicardInit init = PicardInit::Constant);

/// x_{k+1} = x_k + f(x_{t_k}) h + g(x_{t_k}) (w_{k+1} - w_k), on [-r, T].
GridPath euler_solve(const CoefficientSet& coeffs, const Segment& eta, const GridPath& omega,
                     const SolverConfig& config);

struct UniquenessReport {
    std::vector<PicardInit> inits;
    double max_distance = 0.0;  ///< max pairwise (inf, beta) distance on [-r, T]
    double threshold = 0.0;     ///< 10 * picard_tol
    bool passed = false;
};

UniquenessReport uniqueness_probe(const CoefficientSet& coeffs, const Segment& eta, const GridPath& omega,
                                  const SolverConfig& config, std::size_t n_inits = 3);

/// ||x_t||_{inf,beta,[-r,0]} for every node t >= path.t0() + r, in order.
std::vector<double> segment_norm_profile(const GridPath& path, double beta, std::size_t cells_r);

struct BoundRow {
    double t_start = 0.0;
    double t_end = 0.0;
    std::size_t N = 0;
    double lhs = 0.0;  ///< max over the window of the segment norm
    double rhs = 0.0;  ///< bound for this window
    double margin() const noexcept { return rhs - lhs; }
};

struct BoundCheck {
    std::vector<BoundRow> rows;
    double min_margin = 0.0;
    bool passed = false;
};

/// ||x_t||_{inf,beta,[-r,0]} <= (1 - mu)^{-(N(t)+1)} (||eta||_{inf,beta} + 1) at every grid t in [0, T].
BoundCheck growth_bound_check(const SolveReport& report, const Segment& eta, const SolverConfig& config);

struct GronwallReport {
    bool hypothesis_holds = false;
    double hypothesis_worst_ratio = 0.0;  ///< max lhs / rhs of the hypothesis over sampled windows
    std::size_t windows_sampled = 0;
    BoundCheck conclusion;                ///< empty when the hypothesis fails
    std::string message;
};

/// Checks |||z|||_{beta,[s,t]} <= A + C phi(s,t) ||z||_{inf,beta,[s-r,t]} on sampled windows
/// and, where it holds, ||z_t||_{inf,beta} <= (1 - 2mu)^{-(N(t)+1)} (A/mu + ||z_0||_{inf,beta}).
/// Requires mu < min{1/2, C}.
GronwallReport gronwall_check(const GridPath& z, double A, double C, const GridPath& omega,
                              const SolverConfig& config, double mu);

}  // namespace ydde
