#pragma once

// Dependence of the solution on the initial segment: the linearized
// equation
//   y(t) = xi(0) + int_0^t Df(x_s) y_s ds + int_0^t Dg(x_s) y_s dw(s),  y_0 = xi,
// and finite-difference checks of continuity and differentiability.

#include <string>
#include <vector>

#include "ydde/coefficients.hpp"
#include "ydde/grid_path.hpp"
#include "ydde/solver.hpp"

namespace ydde {

struct LinearizedProblem {
    GridPath base_solution;  ///< x(., w, eta) on [-r, T]
    Segment direction;       ///< xi, on the grid of eta
    GridPath omega;
    SolverConfig config;
};

struct LinearizedSolution {
    GridPath y;  ///< on [-r, T]
    GreedyPartition partition;
    std::vector<WindowStats> windows;
    double C = 0.0;  ///< window constant for the delta*beta contraction
    double M = 0.0;  ///< (inf, beta) norm of the base solution
};

/// Windowed Picard for the linear equation, with windows from the exponent
/// delta*beta and constant 2 (L_f + L_g (1 + K') + K' L_M(M) M^delta).
/// Residual tolerance is picard_tol * ||xi||_{inf,delta beta}, so the map
/// xi -> y is linear in floating point under power-of-two scaling.
LinearizedSolution linearized_solve(const CoefficientSet& coeffs, const LinearizedProblem& problem);

struct ContinuityReport {
    double perturbation = 0.0;  ///< ||eta2 - eta1||_{inf,beta}
    double M = 0.0;
    double C = 0.0;             ///< L(T, M)
    double mu = 0.0;            ///< mu actually used
    bool mu_reduced = false;    ///< config.mu was not below min{1/2, C}
    std::size_t N_T = 0;
    BoundCheck pointwise;       ///< per-window rows of the segment-norm inequality
    double full_lhs = 0.0;      ///< ||x(eta2) - x(eta1)||_{inf,beta,[-r,T]}
    double full_rhs = 0.0;      ///< (1 + T/r) (1 - 2mu)^{-(N(T)+1)} ||eta2 - eta1||_{inf,beta}
    double sup_segment = 0.0;   ///< sup_t ||x_t(eta2) - x_t(eta1)||_{inf,beta}
    bool full_passed = false;
    bool passed = false;
};

/// ||x_t(eta2) - x_t(eta1)||_{inf,beta} <= (1 - 2mu)^{-(N(t)+1)} ||eta2 - eta1||_{inf,beta}
/// at every grid t, N from the greedy windows at C = L(T, M), plus the
/// full-interval form with factor 1 + T/r. If config.mu >= min{1/2, C},
/// mu = min{1/2, C} / 2 is used and flagged. Requires ||eta2 - eta1||_{inf,beta} <= 1.
ContinuityReport continuity_check(const CoefficientSet& coeffs, const Segment& eta1, const Segment& eta2,
                                  const GridPath& omega, const SolverConfig& config);

struct DifferentiabilityReport {
    std::vector<double> eps;
    /// sup_t ||x_t(eta + eps xi) - x_t(eta) - eps y_t||_{inf,beta} / eps
    std::vector<double> rho;
    double ratio = 0.0;      ///< rho(last eps) / rho(first eps); 0 when rho vanishes
    bool decreasing = false;
    bool passed = false;
    std::string message;
};

/// Remainder ratios along a strictly decreasing eps ladder. All solves run
/// to the exact discrete fixed point (zero Picard tolerance), so rho is free
/// of iteration error. Passes when rho decreases and the last/first ratio is
/// <= 0.5, or when rho stays at rounding level (linear coefficients).
DifferentiabilityReport differentiability_check(const CoefficientSet& coeffs, const Segment& eta,
                                                const Segment& direction, const GridPath& omega,
                                                const SolverConfig& config, const std::vector<double>& eps_ladder);

/// Config with zero Picard tolerance and enough sweeps for the exact
/// discrete fixed point on any window.
SolverConfig exact_fixed_point_config(const SolverConfig& config);

/// a + s * b, nodewise.
Segment axpy(const Segment& a, double s, const Segment& b);

}  // namespace ydde
