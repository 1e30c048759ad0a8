#include "ydde/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ydde/error.hpp"
#include "ydde/norms.hpp"
#include "ydde/sensitivity.hpp"
#include "ydde/young.hpp"

namespace ydde {

bool VerifyReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

nlohmann::json VerifyReport::to_json() const {
    nlohmann::json out{{"scenario", scenario}, {"passed", passed()}, {"checks", nlohmann::json::array()}};
    for (const auto& c : checks) out["checks"].push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    return out;
}

namespace {

nlohmann::json bound_json(const BoundCheck& b) {
    return {{"passed", b.passed}, {"min_margin", b.min_margin}, {"windows", b.rows.size()}};
}

double sup_abs_diff(const GridPath& a, const GridPath& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.values().size(); ++i) m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
    return m;
}

}  // namespace

VerifyReport verify_scenario(const Scenario& s, const VerifyLimits& lim) {
    VerifyReport rep;
    rep.scenario = s.name;
    const CoefficientSet coeffs = s.coeffs();
    const SolverConfig& cfg = s.config;
    const GridPath omega = s.omega();
    const Segment eta = s.initial();
    const std::size_t nT = cfg.cells_T();
    const auto add = [&](const std::string& name, bool ok, nlohmann::json detail) {
        rep.checks.push_back({name, ok, std::move(detail)});
    };

    const SolveReport sol = picard_solve(coeffs, eta, omega, cfg);

    if (s.enabled("regularity")) {
        const double M = 2.0 + 2.0 * eta.view().sup_norm();
        const RegularityReport r = verify_regularity(coeffs, cfg.r, cfg.mesh, M, lim.regularity_trials, s.driver.seed + 1);
        add("regularity", r.valid,
            {{"M", M},
             {"trials", r.trials},
             {"worst_lipschitz_f", r.worst_lipschitz_f},
             {"worst_dg_bound", r.worst_dg_bound},
             {"worst_dg_holder", r.worst_dg_holder}});
    }

    if (s.enabled("young_loeve")) {
        const YoungConstants yc = YoungConstants::make(cfg.beta, cfg.nu);
        std::size_t violations = 0;
        double worst = 0.0;
        for (std::size_t k = 0; k < lim.young_windows; ++k) {
            const auto pick = [&](std::uint64_t salt) {
                return static_cast<std::size_t>(NormalStream::uniform(s.driver.seed ^ 0x5eedULL, 2 * k + salt) *
                                                static_cast<double>(nT + 1));
            };
            std::size_t a = std::min(pick(0), nT), b = std::min(pick(1), nT);
            if (a > b) std::swap(a, b);
            if (a == b) {
                if (b < nT) ++b;
                else --a;
            }
            const Window w{static_cast<double>(a) * cfg.mesh, static_cast<double>(b) * cfg.mesh};
            const YoungLoeveGap g = young_loeve_gap(sol.solution, omega, w, yc);
            if (!g.holds()) ++violations;
            if (g.bound > 0.0) worst = std::max(worst, g.gap / g.bound);
        }
        add("young_loeve", violations == 0,
            {{"windows", lim.young_windows}, {"violations", violations}, {"worst_gap_over_bound", worst}});
    }

    if (s.enabled("partition")) {
        const GreedyPartition& p = sol.partition;
        bool residual_ok = true;
        for (std::size_t i = 0; i < p.windows(); ++i) {
            if (p.degenerate) break;
            if (!(p.residuals[i] <= p.target())) residual_ok = false;
            if (i + 1 < p.windows() && !(p.overshoots[i] > p.target())) residual_ok = false;
        }
        const double bound = stopping_count_bound(p, omega, cfg.T);
        const bool count_ok = p.degenerate || static_cast<double>(p.N) <= bound;
        add("partition", residual_ok && count_ok,
            {{"N", p.N}, {"count_bound", bound}, {"target", p.target()}, {"degenerate", p.degenerate},
             {"residuals_ok", residual_ok}});
    }

    if (s.enabled("fixed_point")) {
        double worst = 0.0;
        for (const auto& w : sol.windows) worst = std::max(worst, w.residual);
        add("fixed_point", worst <= cfg.picard_tol, {{"max_residual", worst}, {"picard_tol", cfg.picard_tol}});
    }

    if (s.enabled("ball")) {
        add("ball", sol.ball_violations == 0, {{"violations", sol.ball_violations}});
    }

    if (s.enabled("contraction")) {
        double worst = 0.0;
        for (const auto& w : sol.windows) worst = std::max(worst, w.max_ratio);
        const double limit = cfg.mu * (1.0 + lim.contraction_margin);
        add("contraction", worst <= limit, {{"max_ratio", worst}, {"limit", limit}});
    }

    if (s.enabled("euler")) {
        const GridPath eu = euler_solve(coeffs, eta, omega, cfg);
        const double gap = sup_abs_diff(eu, sol.solution);
        const double limit = lim.euler_factor * cfg.picard_tol + 1e-12;
        add("euler", gap <= limit, {{"sup_gap", gap}, {"limit", limit}});
    }

    if (s.enabled("uniqueness")) {
        const UniquenessReport u = uniqueness_probe(coeffs, eta, omega, cfg, 3);
        add("uniqueness", u.passed, {{"max_distance", u.max_distance}, {"threshold", u.threshold}});
    }

    if (s.enabled("growth")) {
        const BoundCheck g = growth_bound_check(sol, eta, cfg);
        add("growth", g.passed, bound_json(g));
    }

    const Segment xi = s.xi();
    const double xi_norm = holder_norm(xi.view(), cfg.beta);

    if (s.enabled("continuity")) {
        bool ok = true;
        nlohmann::json runs = nlohmann::json::array();
        for (double size : lim.perturbations) {
            const double scale = xi_norm > 0.0 ? size / xi_norm : 0.0;
            const ContinuityReport c = continuity_check(coeffs, eta, axpy(eta, scale, xi), omega, cfg);
            ok = ok && c.passed;
            runs.push_back({{"perturbation", c.perturbation},
                            {"C", c.C},
                            {"mu", c.mu},
                            {"mu_reduced", c.mu_reduced},
                            {"N_T", c.N_T},
                            {"pointwise", bound_json(c.pointwise)},
                            {"full_lhs", c.full_lhs},
                            {"full_rhs", c.full_rhs},
                            {"passed", c.passed}});
        }
        add("continuity", ok, {{"runs", runs}});
    }

    if (s.enabled("differentiability")) {
        const DifferentiabilityReport d = differentiability_check(coeffs, eta, xi, omega, cfg, lim.eps_ladder);
        const bool linear = coeffs.family == "linear_delay";
        const double worst = *std::max_element(d.rho.begin(), d.rho.end());
        const bool ok = linear ? worst <= lim.linear_remainder : d.passed;
        add("differentiability", ok,
            {{"eps", d.eps}, {"rho", d.rho}, {"ratio", d.ratio}, {"decreasing", d.decreasing},
             {"linear", linear}, {"message", d.message}});
    }
    return rep;
}

}  // namespace ydde
