#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "ydde/grid_path.hpp"
#include "ydde/norms.hpp"

namespace ydde {

/// Drift f and diffusion g acting on delay segments, their directional
/// derivatives, and the regularity constants the solver relies on:
///   ||f(xi) - f(eta)|| <= L_f ||xi - eta||_inf
///   ||Dg(xi)|| <= L_g
///   ||Dg(xi) - Dg(eta)|| <= L_M(M) ||xi - eta||_inf^delta  on the M-ball.
struct CoefficientSet {
    using Map = std::function<void(const SegmentView& xi, std::span<double> out)>;
    using Derivative =
        std::function<void(const SegmentView& xi, const SegmentView& dir, std::span<double> out)>;

    std::string family;
    std::size_t dim = 1;
    Map f;
    Map g;
    Derivative Df;
    Derivative Dg;
    double L_f = 0.0;
    double L_g = 0.0;
    std::function<double(double)> L_M = [](double) { return 0.0; };
    double delta = 1.0;
    double f0_norm = 0.0;  ///< ||f(0)||
    double g0_norm = 0.0;  ///< ||g(0)||

    /// f and g vanish identically (all constants zero).
    bool trivial() const noexcept {
        return L_f == 0.0 && L_g == 0.0 && f0_norm == 0.0 && g0_norm == 0.0;
    }
};

enum class Family { LinearDelay, SinDelay, ScalarLogisticBounded };

/// Parameters of the built-in families. Matrices are row-major dim x dim;
/// empty means zero.
///
///   linear_delay:   f = A xi(0) + B xi(-r),  g = Sigma xi(-r) + c
///   sin_delay:      f = a xi(0) + b xi(-r),  g = sigma sin(xi(-r)) componentwise
///   scalar_logistic_bounded (dim 1, valid on ||xi||_inf <= domain_radius):
///                   f = a xi(0) (1 - tanh(xi(-r))),  g = sigma tanh(xi(-r))
struct FamilyParams {
    std::size_t dim = 1;
    std::vector<double> A, B, Sigma, c;
    double a = 0.0;
    double b = 0.0;
    double sigma = 0.0;
    double domain_radius = 10.0;
};

Family family_from_string(const std::string& s);
std::string to_string(Family f);

CoefficientSet make_builtin(Family family, const FamilyParams& params);
/// {"family": "...", "params": {...}}
CoefficientSet coefficients_from_json(const nlohmann::json& j);
FamilyParams family_params_from_json(const nlohmann::json& j);

struct RegularityReport {
    double worst_lipschitz_f = 0.0;  ///< max ||f(xi)-f(eta)|| / (L_f ||xi-eta||)
    double worst_dg_bound = 0.0;     ///< max ||Dg(xi) u|| / (L_g ||u||)
    double worst_dg_holder = 0.0;    ///< max ||(Dg(xi)-Dg(eta)) u|| / (L_M ||xi-eta||^delta ||u||)
    std::size_t trials = 0;
    bool valid = true;               ///< every ratio <= 1 + 1e-9
};

/// Random segment pairs on the sup-ball of radius M (delay/mesh give their shape).
RegularityReport verify_regularity(const CoefficientSet& coeffs, double delay, double mesh, double M,
                                   std::size_t trials, std::uint64_t seed = 1);

/// Evaluates t -> f(x_t) (or g, chosen by `which`) on the nodes of `range`.
enum class Which { F, G };
GridPath eval_along(const CoefficientSet& coeffs, Which which, const GridPath& path, double r,
                    NodeRange range);

struct CompositionReport {
    NormReport lhs;
    double bound = 0.0;
    bool holds() const noexcept { return lhs.seminorm <= bound * (1.0 + 1e-12); }
};

/// |||g(x_.)|||_{beta,[a,b]} against L_g |||x|||_{beta,[a-r,b]}.
CompositionReport composition_holder(const CoefficientSet& coeffs, const GridPath& path, double beta,
                                     double r, const Window& window);

/// |||g(x_.) - g(y_.)|||_{delta beta,[a,b]} against
/// L_g (b-a)^{beta - delta beta} |||x-y|||_{beta,[a-r,b]} + L_M M^delta ||x-y||_{inf,[a-r,b]}.
/// M <= 0 selects the larger of the two paths' (inf,beta)-norms on [a-r, b].
CompositionReport composition_difference(const CoefficientSet& coeffs, const GridPath& x,
                                         const GridPath& y, double beta, double r, const Window& window,
                                         double M = 0.0);

}  // namespace ydde
