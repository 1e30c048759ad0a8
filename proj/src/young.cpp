#include "ydde/young.hpp"

#include <cmath>
#include <limits>

#include "ydde/error.hpp"
#include "ydde/norms.hpp"
#include "ydde/simd/kernels.hpp"

namespace ydde {

namespace {

double young_k(double theta) { return 1.0 / (1.0 - std::pow(2.0, 1.0 - theta)); }

void check_same_mesh(const GridPath& x, const GridPath& omega) {
    if (omega.dim() != 1) throw DomainError("driver must be scalar");
    if (std::abs(x.mesh() - omega.mesh()) > 1e-12 * x.mesh())
        throw DomainError("integrand and driver have different meshes");
}

double norm2(const std::vector<double>& v) {
    double sq = 0.0;
    for (double c : v) sq += c * c;
    return std::sqrt(sq);
}

}  // namespace

double young_constant(double beta, double nu) {
    if (!(beta + nu > 1.0)) throw DomainError("Young condition violated: beta + nu must exceed 1");
    return young_k(beta + nu);
}

YoungConstants YoungConstants::make(double beta, double nu, double delta) {
    if (!(beta > 0.0 && beta <= 1.0 && nu > 0.0 && nu <= 1.0))
        throw DomainError("Hölder exponents must lie in (0, 1]");
    if (!(delta > 0.0 && delta <= 1.0)) throw DomainError("delta must lie in (0, 1]");
    if (!(nu + delta * beta > 1.0))
        throw DomainError("Young condition violated: nu + delta*beta must exceed 1");
    return {beta, nu, delta, young_constant(beta, nu), young_k(nu + delta * beta)};
}

std::vector<double> young_integral(const GridPath& x, const GridPath& omega, const Window& window) {
    check_same_mesh(x, omega);
    const NodeRange rx = x.range_of(window);
    const NodeRange rw = omega.range_of(window);
    const std::size_t cells = rx.last - rx.first;
    const double* dw = omega.values().data() + rw.first;
    std::vector<double> out(x.dim());
    if (x.dim() == 1) {
        out[0] = simd::increment_dot(x.values().data() + rx.first, dw, cells);
        return out;
    }
    for (std::size_t c = 0; c < x.dim(); ++c) {
        const auto comp = x.component(c);
        out[c] = simd::increment_dot(comp.data() + rx.first, dw, cells);
    }
    return out;
}

YoungLoeveGap young_loeve_gap(const GridPath& x, const GridPath& omega, const Window& window,
                              const YoungConstants& consts) {
    auto integral = young_integral(x, omega, window);
    const auto xs = x.at(x.index_of(window.a));
    const double dw = omega.at(omega.index_of(window.b))[0] - omega.at(omega.index_of(window.a))[0];
    for (std::size_t c = 0; c < integral.size(); ++c) integral[c] -= xs[c] * dw;
    const double len = window.b - window.a;
    const double bound = consts.K * std::pow(len, consts.beta + consts.nu) *
                         holder_seminorm(omega, consts.nu, window).seminorm *
                         holder_seminorm(x, consts.beta, window).seminorm;
    const NodeRange rx = x.range_of(window);
    const NodeRange rw = omega.range_of(window);
    const std::size_t cells = rx.last - rx.first;
    double mass = norm2(std::vector<double>(xs.begin(), xs.end())) * std::abs(dw);
    for (std::size_t k = 0; k < cells; ++k) {
        const auto xk = x.at(rx.first + k);
        mass += norm2(std::vector<double>(xk.begin(), xk.end())) *
                std::abs(omega.at(rw.first + k + 1)[0] - omega.at(rw.first + k)[0]);
    }
    const double rounding = static_cast<double>(cells + 2) * std::numeric_limits<double>::epsilon() * mass;
    return {norm2(integral), bound, rounding};
}

double young_integral_bound(const GridPath& x, const GridPath& omega, const Window& window,
                            const YoungConstants& consts) {
    check_same_mesh(x, omega);
    const double len = window.b - window.a;
    const auto xs = x.at(x.index_of(window.a));
    const double xs_norm = norm2(std::vector<double>(xs.begin(), xs.end()));
    return std::pow(len, consts.nu) * holder_seminorm(omega, consts.nu, window).seminorm *
           (xs_norm + consts.K * std::pow(len, consts.beta) * holder_seminorm(x, consts.beta, window).seminorm);
}

}  // namespace ydde
