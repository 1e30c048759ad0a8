#include "ydde/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "picard_engine.hpp"
#include "ydde/error.hpp"
#include "ydde/norms.hpp"

namespace ydde {

namespace {

double full_norm(const GridPath& x, double beta) { return holder_norm(x.view({0, x.size() - 1}), beta); }

// Below this a remainder is treated as rounding noise.
constexpr double kRoundingFloor = 1e-9;

}  // namespace

Segment axpy(const Segment& a, double s, const Segment& b) {
    if (a.values().size() != b.values().size() || a.dim() != b.dim())
        throw DomainError("segments differ in shape");
    std::vector<double> v(a.values().size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.values()[i] + s * b.values()[i];
    return Segment(a.delay(), a.mesh(), a.dim(), std::move(v));
}

SolverConfig exact_fixed_point_config(const SolverConfig& config) {
    SolverConfig c = config;
    c.picard_tol = 0.0;
    c.picard_max_iters = std::max(config.picard_max_iters, config.cells_T() + 2);
    return c;
}

LinearizedSolution linearized_solve(const CoefficientSet& coeffs, const LinearizedProblem& pb) {
    const SolverConfig& cfg = pb.config;
    cfg.validate();
    const std::size_t R = cfg.cells_r();
    const std::size_t nT = cfg.cells_T();
    const std::size_t d = coeffs.dim;
    if (pb.direction.dim() != d || pb.direction.nodes() != R + 1)
        throw DomainError("direction must be a segment on the solver grid");
    if (pb.base_solution.dim() != d || pb.base_solution.size() != R + nT + 1)
        throw DomainError("base solution must cover [-r, T] on the solver grid");
    if (!coeffs.Df || !coeffs.Dg) throw DomainError("coefficients do not expose derivatives");

    LinearizedSolution out;
    const YoungConstants yc = YoungConstants::make(cfg.beta, cfg.nu, coeffs.delta);
    const double exponent = coeffs.delta * cfg.beta;
    out.M = full_norm(pb.base_solution, cfg.beta);
    const double lm = coeffs.L_M ? coeffs.L_M(out.M) : 0.0;
    const double mdelta = lm == 0.0 ? 0.0 : std::pow(out.M, coeffs.delta);
    out.C = 2.0 * (coeffs.L_f + coeffs.L_g * (1.0 + yc.Kprime) + yc.Kprime * lm * mdelta);

    if (out.C == 0.0) {
        out.partition = degenerate_partition(cfg, cfg.mu);
    } else {
        const double mu = cfg.mu < out.C ? cfg.mu : 0.5 * out.C;
        out.partition = greedy_partition(pb.omega, cfg, out.C, exponent, mu);
    }

    std::vector<double> buf(pb.direction.values());
    buf.resize((R + nT + 1) * d, 0.0);
    const GridPath& base = pb.base_solution;
    const detail::Integrand G = [&](std::size_t node, const SegmentView& y, std::span<double> drift,
                                    std::span<double> diffusion) {
        const SegmentView x = base.view({node - R, node});
        coeffs.Df(x, y, drift);
        coeffs.Dg(x, y, diffusion);
    };
    detail::EngineSettings s;
    s.beta = exponent;
    s.mu = out.partition.mu;
    s.tol = cfg.picard_tol * holder_norm(pb.direction.view(), exponent);
    s.max_iters = cfg.picard_max_iters;
    s.init = PicardInit::Constant;
    out.windows = detail::solve_partition(G, buf, d, R, cfg.mesh, pb.omega.values().data(), out.partition.nodes, s);
    out.y = GridPath(-cfg.r, cfg.mesh, d, std::move(buf));
    return out;
}

ContinuityReport continuity_check(const CoefficientSet& coeffs, const Segment& eta1, const Segment& eta2,
                                  const GridPath& omega, const SolverConfig& config) {
    ContinuityReport rep;
    const std::size_t R = config.cells_r();
    const Segment gap = axpy(eta2, -1.0, eta1);
    rep.perturbation = holder_norm(gap.view(), config.beta);
    if (rep.perturbation > 1.0) throw DomainError("continuity check needs ||eta2 - eta1||_{inf,beta} <= 1");

    const GridPath x1 = picard_solve(coeffs, eta1, omega, config).solution;
    const GridPath x2 = picard_solve(coeffs, eta2, omega, config).solution;
    rep.M = std::max(full_norm(x1, config.beta), full_norm(x2, config.beta));

    GreedyPartition part;
    if (coeffs.trivial()) {
        rep.mu = config.mu;
        part = degenerate_partition(config, rep.mu);
    } else {
        const ContractionConstants cc = compute_contraction_constants(coeffs, config);
        rep.C = cc.L(config.T, rep.M);
        if (rep.C == 0.0) {
            // Constant coefficients: solutions differ by a constant shift.
            rep.mu = config.mu;
            part = degenerate_partition(config, rep.mu);
        } else {
            const double cap = std::min(0.5, rep.C);
            rep.mu_reduced = !(config.mu < cap);
            rep.mu = rep.mu_reduced ? 0.5 * cap : config.mu;
            part = greedy_partition(omega, config, rep.C, config.beta, rep.mu);
        }
    }
    rep.N_T = part.N;

    const GridPath z = difference(x2, x1);
    const auto profile = segment_norm_profile(z, config.beta, R);
    const auto factor = [&](std::size_t n) { return std::pow(1.0 - 2.0 * rep.mu, -static_cast<double>(n + 1)); };

    BoundCheck& bc = rep.pointwise;
    bc.passed = true;
    bc.min_margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < part.windows(); ++i) {
        BoundRow row;
        row.t_start = part.times[i];
        row.t_end = part.times[i + 1];
        row.N = i;
        const std::size_t a = part.nodes[i];
        const std::size_t b = i + 1 == part.windows() ? part.nodes[i + 1] : part.nodes[i + 1] - 1;
        for (std::size_t k = a; k <= b; ++k) row.lhs = std::max(row.lhs, profile[k]);
        row.rhs = factor(i) * rep.perturbation;
        bc.min_margin = std::min(bc.min_margin, row.margin());
        if (!(row.lhs <= row.rhs)) bc.passed = false;
        bc.rows.push_back(row);
    }
    rep.sup_segment = *std::max_element(profile.begin(), profile.end());
    rep.full_lhs = full_norm(z, config.beta);
    const double spread = 1.0 + config.T / config.r;
    rep.full_rhs = spread * factor(part.N) * rep.perturbation;
    rep.full_passed = rep.full_lhs <= spread * rep.sup_segment && rep.full_lhs <= rep.full_rhs;
    rep.passed = bc.passed && rep.full_passed;
    return rep;
}

DifferentiabilityReport differentiability_check(const CoefficientSet& coeffs, const Segment& eta,
                                                const Segment& direction, const GridPath& omega,
                                                const SolverConfig& config, const std::vector<double>& eps_ladder) {
    if (eps_ladder.empty()) throw DomainError("eps ladder is empty");
    for (std::size_t i = 0; i < eps_ladder.size(); ++i) {
        if (!(eps_ladder[i] > 0.0)) throw DomainError("eps values must be positive");
        if (i > 0 && !(eps_ladder[i] < eps_ladder[i - 1])) throw DomainError("eps ladder must be decreasing");
    }
    const SolverConfig cfg = exact_fixed_point_config(config);
    const std::size_t R = cfg.cells_r();
    const GridPath base = picard_solve(coeffs, eta, omega, cfg).solution;
    const GridPath y = linearized_solve(coeffs, {base, direction, omega, cfg}).y;

    DifferentiabilityReport rep;
    rep.eps = eps_ladder;
    for (double eps : eps_ladder) {
        const GridPath xe = picard_solve(coeffs, axpy(eta, eps, direction), omega, cfg).solution;
        std::vector<double> rem(xe.values().size());
        for (std::size_t i = 0; i < rem.size(); ++i)
            rem[i] = xe.values()[i] - base.values()[i] - eps * y.values()[i];
        const auto profile = segment_norm_profile(GridPath(xe.t0(), xe.mesh(), xe.dim(), std::move(rem)), cfg.beta, R);
        rep.rho.push_back(*std::max_element(profile.begin(), profile.end()) / eps);
    }

    if (rep.rho.front() <= kRoundingFloor) {
        rep.ratio = 0.0;
        rep.decreasing = true;
        rep.passed = *std::max_element(rep.rho.begin(), rep.rho.end()) <= kRoundingFloor;
        rep.message = rep.passed ? "remainder at rounding level" : "remainder grows from rounding level";
        return rep;
    }
    rep.ratio = rep.rho.back() / rep.rho.front();
    rep.decreasing = true;
    for (std::size_t i = 1; i < rep.rho.size(); ++i)
        if (rep.rho[i] > rep.rho[i - 1] * (1.0 + 1e-9)) rep.decreasing = false;
    rep.passed = rep.decreasing && rep.ratio <= 0.5;
    rep.message = rep.passed ? "remainder is o(eps)" : (rep.decreasing ? "remainder decays too slowly" : "remainder is not monotone");
    return rep;
}

}  // namespace ydde
