#include "ydde/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "picard_engine.hpp"
#include "ydde/error.hpp"
#include "ydde/norms.hpp"

namespace ydde {

std::size_t SolverConfig::cells_T() const { return cells_in(T, mesh, "horizon T"); }
std::size_t SolverConfig::cells_r() const { return cells_in(r, mesh, "delay r"); }
std::size_t SolverConfig::stride() const {
    return bisect_tol == 0.0 ? 1 : cells_in(bisect_tol, mesh, "bisect_tol");
}

void SolverConfig::validate() const {
    if (!(nu > 0.5 && nu <= 1.0)) throw DomainError("driver exponent nu must lie in (1/2, 1]");
    if (!(beta > 0.0 && beta < nu)) throw DomainError("beta must lie in (0, nu)");
    if (!(mu > 0.0 && mu < 0.5)) throw DomainError("mu must lie in (0, 1/2)");
    if (!(mesh > 0.0)) throw DomainError("mesh must be positive");
    if (!(T > 0.0)) throw DomainError("horizon T must be positive");
    if (!(r > 0.0)) throw DomainError("delay r must be positive");
    if (cells_T() == 0 || cells_r() == 0) throw DomainError("T and r must span at least one cell");
    if (!(picard_tol >= 0.0)) throw DomainError("picard_tol must be non-negative");
    if (picard_max_iters == 0) throw DomainError("picard_max_iters must be at least 1");
    if (!(bisect_tol >= 0.0)) throw DomainError("bisect_tol must be non-negative");
    (void)stride();
}

SolverConfig solver_config_from_json(const nlohmann::json& j, SolverConfig c) {
    c.beta = j.value("beta", c.beta);
    c.nu = j.value("nu", c.nu);
    c.mu = j.value("mu", c.mu);
    c.mesh = j.value("mesh", c.mesh);
    c.T = j.value("T", c.T);
    c.r = j.value("r", c.r);
    c.picard_tol = j.value("picard_tol", c.picard_tol);
    c.picard_max_iters = j.value("picard_max_iters", c.picard_max_iters);
    c.bisect_tol = j.value("bisect_tol", c.bisect_tol);
    return c;
}

nlohmann::json to_json(const SolverConfig& c) {
    return {{"beta", c.beta},       {"nu", c.nu},
            {"mu", c.mu},           {"mesh", c.mesh},
            {"T", c.T},             {"r", c.r},
            {"picard_tol", c.picard_tol}, {"picard_max_iters", c.picard_max_iters},
            {"bisect_tol", c.bisect_tol}};
}

double ContractionConstants::Cprime(double dt) const {
    const double db = std::pow(dt, young.beta);
    return (1.0 + db) * (g0 + L_g + L_g * young.K * db + Lprime);
}

double ContractionConstants::L(double dt, double M) const {
    const double lm = L_M ? L_M(M) : 0.0;
    const double mpow = lm == 0.0 ? 0.0 : std::pow(M, delta);
    return L_f + L_g + L_g * young.Kprime * std::pow(dt, young.beta) +
           young.Kprime * lm * mpow * std::pow(dt, delta * young.beta);
}

ContractionConstants compute_contraction_constants(const CoefficientSet& coeffs, const SolverConfig& config) {
    ContractionConstants cc;
    cc.young = YoungConstants::make(config.beta, config.nu, coeffs.delta);
    cc.L_f = coeffs.L_f;
    cc.L_g = coeffs.L_g;
    cc.g0 = coeffs.g0_norm;
    cc.delta = coeffs.delta;
    cc.L_M = coeffs.L_M;
    cc.Lprime = std::max(coeffs.L_f, coeffs.f0_norm);
    cc.C = 2.0 * (cc.g0 + cc.Lprime + cc.L_g * (cc.young.K + 1.0));
    if (!(cc.C > 0.0)) throw DomainError("C must be positive to fix mu < C");
    return cc;
}

std::size_t GreedyPartition::N_at_node(std::size_t node) const {
    const std::size_t last = final_clamped ? nodes.size() - 1 : nodes.size();
    std::size_t n = 0;
    for (std::size_t i = 1; i < last; ++i)
        if (nodes[i] <= node) ++n;
    return n;
}

double window_phi(double dt, double seminorm, double beta, double nu) {
    return std::pow(dt, 1.0 - beta) + std::pow(dt, nu - beta) * seminorm;
}

namespace {

void check_driver(const GridPath& omega, const SolverConfig& config) {
    if (omega.dim() != 1) throw DomainError("driver must be scalar");
    if (std::abs(omega.t0()) > 1e-12) throw DomainError("driver must start at t = 0");
    if (std::abs(omega.mesh() - config.mesh) > 1e-12 * config.mesh)
        throw DomainError("driver mesh differs from solver mesh");
    if (omega.size() < config.cells_T() + 1) throw DomainError("driver does not cover [0, T]");
}

void check_history(const Segment& eta, const CoefficientSet& coeffs, const SolverConfig& config) {
    if (eta.dim() != coeffs.dim) throw DomainError("initial segment dimension differs from coefficients");
    if (std::abs(eta.mesh() - config.mesh) > 1e-12 * config.mesh)
        throw DomainError("initial segment mesh differs from solver mesh");
    if (eta.nodes() != config.cells_r() + 1) throw DomainError("initial segment does not span [-r, 0]");
}

}  // namespace

GreedyPartition greedy_partition(const GridPath& omega, const SolverConfig& config, double C) {
    return greedy_partition(omega, config, C, config.beta, config.mu);
}

GreedyPartition greedy_partition(const GridPath& omega, const SolverConfig& config, double C, double beta,
                                 double mu) {
    check_driver(omega, config);
    if (!(C > 0.0)) throw DomainError("C must be positive to fix mu < C");
    if (!(mu > 0.0 && mu < C)) throw DomainError("mu must lie in (0, C)");
    if (!(beta > 0.0 && beta < config.nu)) throw DomainError("beta must lie in (0, nu)");

    const std::size_t nT = config.cells_T();
    const std::size_t stride = config.stride();
    const double h = config.mesh;
    GreedyPartition part;
    part.C = C;
    part.mu = mu;
    part.beta = beta;
    part.nu = config.nu;
    const double target = mu / C;
    part.times = {0.0};
    part.nodes = {0};

    std::size_t p = 0;
    const auto phi = [&](std::size_t q) {
        const double semi = holder_seminorm(omega.view({p, q}), config.nu).seminorm;
        return window_phi(static_cast<double>(q - p) * h, semi, beta, config.nu);
    };
    const auto node = [&](std::size_t j) { return std::min(nT, p + j * stride); };

    while (p < nT) {
        const double first = phi(node(1));
        if (first > target)
            throw DomainError("first stopping step exceeds mu/C at t = " + std::to_string(static_cast<double>(p) * h) +
                              ": refine mesh or increase mu");
        // Galloping: ok_steps satisfies phi <= target; bad_steps (if any) violates it.
        std::size_t ok_steps = 1;
        double ok_phi = first;
        std::size_t bad_steps = 0;
        double bad_phi = std::numeric_limits<double>::quiet_NaN();
        while (node(ok_steps) < nT) {
            const std::size_t cand = 2 * ok_steps;
            const double v = phi(node(cand));
            if (v <= target) {
                ok_steps = cand;
                ok_phi = v;
            } else {
                bad_steps = cand;
                bad_phi = v;
                break;
            }
        }
        if (bad_steps != 0) {
            while (bad_steps - ok_steps > 1) {
                const std::size_t mid = ok_steps + (bad_steps - ok_steps) / 2;
                const double v = phi(node(mid));
                if (v <= target) {
                    ok_steps = mid;
                    ok_phi = v;
                } else {
                    bad_steps = mid;
                    bad_phi = v;
                }
            }
        }
        const std::size_t q = node(ok_steps);
        part.times.push_back(static_cast<double>(q) * h);
        part.nodes.push_back(q);
        part.residuals.push_back(ok_phi);
        part.overshoots.push_back(q == nT ? std::numeric_limits<double>::quiet_NaN() : bad_phi);
        p = q;
    }
    part.final_clamped = true;
    part.N = part.times.size() - 2;
    return part;
}

GreedyPartition degenerate_partition(const SolverConfig& config, double mu) {
    GreedyPartition part;
    const std::size_t nT = config.cells_T();
    part.times = {0.0, static_cast<double>(nT) * config.mesh};
    part.nodes = {0, nT};
    part.residuals = {0.0};
    part.overshoots = {std::numeric_limits<double>::quiet_NaN()};
    part.degenerate = true;
    part.mu = mu;
    part.beta = config.beta;
    part.nu = config.nu;
    part.N = 0;
    return part;
}

double stopping_count_bound(const GreedyPartition& p, const GridPath& omega, double T) {
    if (p.degenerate) return 0.0;
    const double gap = p.nu - p.beta;
    const double k = std::ceil(1.0 / gap);
    const std::size_t nT = p.nodes.back();
    const double semi = holder_seminorm(omega.view({0, nT}), p.nu).seminorm;
    return std::pow(2.0, k - 1.0) * std::pow(p.C / p.mu, k) *
           (std::pow(T, k * (1.0 - p.beta)) + std::pow(T, k * gap) * std::pow(semi, k));
}

namespace {

detail::Integrand nonlinear_integrand(const CoefficientSet& coeffs) {
    return [&coeffs](std::size_t, const SegmentView& seg, std::span<double> drift, std::span<double> diffusion) {
        coeffs.f(seg, drift);
        coeffs.g(seg, diffusion);
    };
}

std::vector<double> history_buffer(const Segment& eta, std::size_t nT) {
    std::vector<double> buf(eta.values());
    buf.resize((eta.nodes() + nT) * eta.dim(), 0.0);
    return buf;
}

}  // namespace

GridPath map_F(const GridPath& x, const CoefficientSet& coeffs, const GridPath& omega, const Window& window,
               const Segment& history) {
    if (omega.dim() != 1) throw DomainError("driver must be scalar");
    if (x.dim() != coeffs.dim || history.dim() != coeffs.dim) throw DomainError("dimension mismatch in map_F");
    const std::size_t R = cells_in(history.delay(), history.mesh(), "delay r");
    const std::size_t p = omega.index_of(window.a);
    const std::size_t q = omega.index_of(window.b);
    if (q <= p) throw DomainError("window must have positive length");
    const std::size_t m = q - p;
    if (x.size() != R + m + 1 || std::abs(x.t0() - (window.a - history.delay())) > 1e-9 * x.mesh())
        throw DomainError("map_F input must cover [t_i - r, t_{i+1}]");
    const std::size_t d = x.dim();
    if (!std::equal(history.values().begin(), history.values().end(), x.values().begin()))
        throw DomainError("map_F input disagrees with the history segment");
    std::vector<double> out(x.values().size());
    detail::sweep(nonlinear_integrand(coeffs), x.values().data(), out.data(), d, R, m, x.mesh(),
                  omega.values().data() + p, p + R);
    return GridPath(x.t0(), x.mesh(), d, std::move(out));
}

namespace {

SolveReport solve_impl(const CoefficientSet& coeffs, const Segment& eta, const GridPath& omega,
                       const SolverConfig& config, PicardInit init, const std::vector<double>* oracle) {
    const auto started = std::chrono::steady_clock::now();
    config.validate();
    check_driver(omega, config);
    check_history(eta, coeffs, config);
    const std::size_t R = config.cells_r();
    const std::size_t nT = config.cells_T();
    const std::size_t d = coeffs.dim;

    SolveReport rep;
    if (coeffs.trivial()) {
        rep.partition = degenerate_partition(config, config.mu);
    } else {
        const ContractionConstants cc = compute_contraction_constants(coeffs, config);
        if (!(config.mu < cc.C)) throw DomainError("mu must be below C");
        rep.C = cc.C;
        rep.partition = greedy_partition(omega, config, cc.C);
    }

    std::vector<double> buf = history_buffer(eta, nT);
    detail::EngineSettings s;
    s.beta = config.beta;
    s.mu = config.mu;
    s.tol = config.picard_tol;
    s.max_iters = config.picard_max_iters;
    s.init = init;
    s.oracle = oracle;
    s.check_ball = true;
    rep.windows = detail::solve_partition(nonlinear_integrand(coeffs), buf, d, R, config.mesh,
                                          omega.values().data(), rep.partition.nodes, s);
    rep.solution = GridPath(-config.r, config.mesh, d, std::move(buf));

    std::size_t bisected = 0;
    double worst_ratio = 0.0;
    for (const auto& w : rep.windows) {
        rep.ball_violations += w.ball_violations;
        bisected += w.bisected ? 1 : 0;
        worst_ratio = std::max(worst_ratio, w.max_ratio);
    }
    if (rep.ball_violations > 0)
        rep.warnings.push_back(std::to_string(rep.ball_violations) + " Picard iterates left the invariant ball");
    if (bisected > 0) rep.warnings.push_back(std::to_string(bisected / 2) + " windows were bisected to converge");
    if (worst_ratio > 1.5 * config.mu)
        rep.warnings.push_back("observed contraction ratio " + std::to_string(worst_ratio) + " exceeds 1.5 mu");
    rep.nu_seminorm = holder_seminorm(rep.solution.view({R, R + nT}), config.nu).seminorm;
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return rep;
}

}  // namespace

SolveReport picard_solve(const CoefficientSet& coeffs, const Segment& eta, const GridPath& omega,
                         const SolverConfig& config, PicardInit init) {
    if (init == PicardInit::PerturbedOracle) {
        const GridPath oracle = euler_solve(coeffs, eta, omega, config);
        return solve_impl(coeffs, eta, omega, config, init, &oracle.values());
    }
    return solve_impl(coeffs, eta, omega, config, init, nullptr);
}

GridPath euler_solve(const CoefficientSet& coeffs, const Segment& eta, const GridPath& omega,
                     const SolverConfig& config) {
    config.validate();
    check_driver(omega, config);
    check_history(eta, coeffs, config);
    const std::size_t R = config.cells_r();
    const std::size_t nT = config.cells_T();
    std::vector<double> buf = history_buffer(eta, nT);
    detail::sweep(nonlinear_integrand(coeffs), buf.data(), buf.data(), coeffs.dim, R, nT, config.mesh,
                  omega.values().data(), R);
    return GridPath(-config.r, config.mesh, coeffs.dim, std::move(buf));
}

UniquenessReport uniqueness_probe(const CoefficientSet& coeffs, const Segment& eta, const GridPath& omega,
                                  const SolverConfig& config, std::size_t n_inits) {
    static constexpr PicardInit kAll[] = {PicardInit::Constant, PicardInit::LinearExtension,
                                          PicardInit::PerturbedOracle};
    n_inits = std::clamp<std::size_t>(n_inits, 2, 3);
    UniquenessReport rep;
    rep.threshold = 10.0 * config.picard_tol;
    std::vector<GridPath> sols;
    for (std::size_t i = 0; i < n_inits; ++i) {
        rep.inits.push_back(kAll[i]);
        sols.push_back(picard_solve(coeffs, eta, omega, config, kAll[i]).solution);
    }
    const NodeRange all{0, sols[0].size() - 1};
    for (std::size_t i = 0; i < sols.size(); ++i)
        for (std::size_t j = i + 1; j < sols.size(); ++j)
            rep.max_distance =
                std::max(rep.max_distance, holder_norm(difference(sols[i], sols[j]).view(all), config.beta));
    rep.passed = rep.max_distance <= rep.threshold;
    return rep;
}

std::vector<double> segment_norm_profile(const GridPath& path, double beta, std::size_t cells_r) {
    std::vector<double> out;
    if (path.size() <= cells_r) return out;
    out.reserve(path.size() - cells_r);
    for (std::size_t k = cells_r; k < path.size(); ++k) out.push_back(holder_norm(path.view({k - cells_r, k}), beta));
    return out;
}

namespace {

// Rows per window; t in [t_i, t_{i+1}) has N(t) = i, the final window is closed.
BoundCheck windowed_bound(const std::vector<double>& profile, const GreedyPartition& part,
                          const std::function<double(std::size_t)>& rhs_for) {
    BoundCheck bc;
    bc.min_margin = std::numeric_limits<double>::infinity();
    bc.passed = true;
    const std::size_t windows = part.windows();
    for (std::size_t i = 0; i < windows; ++i) {
        BoundRow row;
        row.t_start = part.times[i];
        row.t_end = part.times[i + 1];
        row.N = i;
        const std::size_t a = part.nodes[i];
        const std::size_t b = i + 1 == windows ? part.nodes[i + 1] : part.nodes[i + 1] - 1;
        for (std::size_t k = a; k <= b && k < profile.size(); ++k) row.lhs = std::max(row.lhs, profile[k]);
        row.rhs = rhs_for(i);
        bc.min_margin = std::min(bc.min_margin, row.margin());
        if (!(row.lhs <= row.rhs)) bc.passed = false;
        bc.rows.push_back(row);
    }
    return bc;
}

}  // namespace

BoundCheck growth_bound_check(const SolveReport& report, const Segment& eta, const SolverConfig& config) {
    const std::size_t R = config.cells_r();
    const auto profile = segment_norm_profile(report.solution, config.beta, R);
    const double base = holder_norm(eta.view(), config.beta) + 1.0;
    const double mu = config.mu;
    return windowed_bound(profile, report.partition,
                          [&](std::size_t n) { return std::pow(1.0 - mu, -static_cast<double>(n + 1)) * base; });
}

GronwallReport gronwall_check(const GridPath& z, double A, double C, const GridPath& omega,
                              const SolverConfig& config, double mu) {
    config.validate();
    check_driver(omega, config);
    if (!(mu > 0.0 && mu < std::min(0.5, C))) throw DomainError("Gronwall check needs 0 < mu < min{1/2, C}");
    const std::size_t R = config.cells_r();
    const std::size_t nT = config.cells_T();
    if (z.size() < R + nT + 1 || std::abs(z.t0() + config.r) > 1e-9 * config.mesh)
        throw DomainError("Gronwall check needs z on [-r, T]");

    GronwallReport rep;
    const double h = config.mesh;
    // Starting points at eighths of the horizon, dyadic lengths from one cell.
    for (std::size_t e = 0; e < 8; ++e) {
        const std::size_t s = e * nT / 8;
        for (std::size_t len = 1; s + len <= nT; len *= 2) {
            const std::size_t t = s + len;
            const double lhs = holder_seminorm(z.view({s + R, t + R}), config.beta).seminorm;
            const double wsemi = holder_seminorm(omega.view({s, t}), config.nu).seminorm;
            const double rhs = A + C * window_phi(static_cast<double>(len) * h, wsemi, config.beta, config.nu) *
                                       holder_norm(z.view({s, t + R}), config.beta);
            const double ratio = rhs > 0.0 ? lhs / rhs : (lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
            rep.hypothesis_worst_ratio = std::max(rep.hypothesis_worst_ratio, ratio);
            ++rep.windows_sampled;
        }
    }
    rep.hypothesis_holds = rep.hypothesis_worst_ratio <= 1.0 + 1e-9;
    if (!rep.hypothesis_holds) {
        rep.message = "hypothesis fails on a sampled window (worst ratio " + std::to_string(rep.hypothesis_worst_ratio) +
                      "); conclusion not checked";
        return rep;
    }
    const GreedyPartition part = greedy_partition(omega, config, C, config.beta, mu);
    const auto profile = segment_norm_profile(z, config.beta, R);
    const double base = A / mu + holder_norm(z.view({0, R}), config.beta);
    rep.conclusion = windowed_bound(profile, part, [&](std::size_t n) {
        return std::pow(1.0 - 2.0 * mu, -static_cast<double>(n + 1)) * base;
    });
    rep.message = rep.conclusion.passed ? "bound holds" : "bound violated";
    return rep;
}

}  // namespace ydde
