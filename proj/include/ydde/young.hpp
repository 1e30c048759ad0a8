#pragma once

#include <vector>

#include "ydde/grid_path.hpp"

namespace ydde {

/// Constants of the Young–Loève estimate for an integrand of exponent beta
/// against a driver of exponent nu, plus K' for the reduced exponent
/// delta * beta used in difference estimates.
struct YoungConstants {
    double beta = 0.0;
    double nu = 0.0;
    double delta = 1.0;
    double K = 0.0;       ///< 1 / (1 - 2^{1 - (beta + nu)})
    double Kprime = 0.0;  ///< 1 / (1 - 2^{1 - (nu + delta beta)})

    /// Throws DomainError("Young condition violated") unless beta + nu > 1
    /// and nu + delta beta > 1.
    static YoungConstants make(double beta, double nu, double delta = 1.0);
};

/// 1 / (1 - 2^{1 - (beta + nu)}); requires beta + nu > 1.
double young_constant(double beta, double nu);

/// Left-point Riemann–Stieltjes sum sum_k x(u_k) (omega(u_{k+1}) - omega(u_k))
/// over the grid nodes of [s, t]. Both paths must share the mesh.
std::vector<double> young_integral(const GridPath& x, const GridPath& omega, const Window& window);

struct YoungLoeveGap {
    double gap = 0.0;    ///< ||int_s^t x dw - x(s)(w(t) - w(s))||
    double bound = 0.0;  ///< K (t-s)^{beta+nu} |||w|||_nu |||x|||_beta
    /// Floating-point error bound of the computed gap, (n + 2) eps sum |x_k| |dw_k|.
    /// The bound can be exactly 0 (constant integrand) while the sum and the
    /// telescoped increment differ by rounding.
    double rounding = 0.0;
    bool holds() const noexcept { return gap <= bound + rounding; }
};

/// Gap and certificate with grid seminorms on the window. The integral is
/// the left-point sum on the paths' own grid; pass finer samples for a
/// more refined quadrature.
YoungLoeveGap young_loeve_gap(const GridPath& x, const GridPath& omega, const Window& window,
                              const YoungConstants& consts);

/// (t-s)^nu |||w|||_nu (||x(s)|| + K (t-s)^beta |||x|||_beta), the a priori
/// bound on ||int_s^t x dw||.
double young_integral_bound(const GridPath& x, const GridPath& omega, const Window& window,
                            const YoungConstants& consts);

}  // namespace ydde
