#include <cmath>
#include <string>

#include "doctest.h"

#include "ydde/error.hpp"
#include "ydde/norms.hpp"
#include "ydde/scenario.hpp"
#include "ydde/solver.hpp"

using namespace ydde;

namespace {

Scenario scenario(const std::string& name) { return load_scenario(std::string(YDDE_SCENARIO_DIR) + "/" + name + ".json"); }

GridPath zero_driver(const SolverConfig& cfg) {
    return GridPath::scalar(0.0, cfg.mesh, std::vector<double>(cfg.cells_T() + 1, 0.0));
}

}  // namespace

TEST_CASE("config validation") {
    SolverConfig c;
    CHECK_NOTHROW(c.validate());
    c.mu = 0.5;
    CHECK_THROWS_AS(c.validate(), DomainError);
    c = {};
    c.nu = 0.5;
    CHECK_THROWS_AS(c.validate(), DomainError);
    c = {};
    c.beta = 0.7;
    CHECK_THROWS_AS(c.validate(), DomainError);
    c = {};
    c.r = 0.1;
    CHECK_THROWS_AS(c.validate(), DomainError);
    c = {};
    CHECK(c.cells_T() == 1024);
    CHECK(c.cells_r() == 256);
    const SolverConfig back = solver_config_from_json(to_json(c));
    CHECK(back.mesh == c.mesh);
    CHECK(back.picard_tol == c.picard_tol);
}

TEST_CASE("flat driver windows have the analytic length") {
    SolverConfig cfg;
    cfg.beta = 0.4;
    const GreedyPartition p = greedy_partition(zero_driver(cfg), cfg, 8.0);
    const double exact = std::pow(cfg.mu / 8.0, 1.0 / (1.0 - cfg.beta));
    CHECK(exact == doctest::Approx(0.0031004).epsilon(1e-4));
    for (std::size_t i = 0; i + 1 < p.windows(); ++i) {
        const double len = p.times[i + 1] - p.times[i];
        CHECK(std::abs(len - exact) <= cfg.mesh);
        CHECK(p.residuals[i] <= p.target());
        CHECK(p.overshoots[i] > p.target());
    }
    CHECK(p.times.back() == 1.0);
    CHECK(p.N == p.times.size() - 2);
    CHECK(window_phi(exact, 0.0, 0.4, 0.7) == doctest::Approx(1.0 / 32));
}

TEST_CASE("growth factor for three stopping times") {
    CHECK(std::pow(0.75, -4.0) == doctest::Approx(3.1605).epsilon(1e-4));
}

TEST_CASE("stopping count stays under its bound across seeds") {
    Scenario s = scenario("sin_delay");
    const ContractionConstants cc = compute_contraction_constants(s.coeffs(), s.config);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        apply_overrides(s, seed, std::nullopt);
        const GridPath w = s.omega();
        const GreedyPartition p = greedy_partition(w, s.config, cc.C);
        CHECK(double(p.N) <= stopping_count_bound(p, w, s.config.T));
        CHECK(p.N_at_node(s.config.cells_T()) == p.N);
    }
}

TEST_CASE("first window larger than mu / C is rejected") {
    SolverConfig cfg;
    CHECK_THROWS_WITH_AS(greedy_partition(zero_driver(cfg), cfg, 1e6), doctest::Contains("refine mesh"), DomainError);
    FamilyParams none;
    CHECK_THROWS_WITH_AS(compute_contraction_constants(make_builtin(Family::SinDelay, none), cfg),
                         doctest::Contains("C must be positive"), DomainError);
}

TEST_CASE("integral map on a constant path") {
    FamilyParams p;
    p.A = {-1.0};
    p.c = {0.5};
    const CoefficientSet cs = make_builtin(Family::LinearDelay, p);
    const double h = 0.125;
    const Segment hist = Segment::constant(0.25, h, std::vector<double>{2.0});
    const GridPath x = GridPath::scalar(0.25, h, {2, 2, 2, 2, 2});  // [t_i - r, t_i + 2h], t_i = 0.5
    const GridPath w = GridPath::scalar(0.0, h, {0, 0, 0, 0, 0, 1, 3, 0, 0});
    const GridPath F = map_F(x, cs, w, {0.5, 0.75}, hist);
    CHECK(F.at(2)[0] == 2.0);
    // drift -2 per unit time, diffusion 0.5 against increments 1 then 2
    CHECK(F.at(3)[0] == doctest::Approx(2.0 - 2.0 * h + 0.5 * 1.0));
    CHECK(F.at(4)[0] == doctest::Approx(2.0 - 4.0 * h + 0.5 * 3.0));
    const GridPath bad = GridPath::scalar(0.25, h, {2, 1, 2, 2, 2});
    CHECK_THROWS_AS(map_F(bad, cs, w, {0.5, 0.75}, hist), DomainError);
}

TEST_CASE("exponential decay") {
    const Scenario s = scenario("exp_decay");
    const SolveReport rep = picard_solve(s.coeffs(), s.initial(), s.omega(), s.config);
    double err = 0.0;
    for (std::size_t k = 256; k < rep.solution.size(); ++k)
        err = std::max(err, std::abs(rep.solution.at(k)[0] - std::exp(-rep.solution.time(k))));
    CHECK(err <= 1e-3);
    CHECK(rep.solution.at(0)[0] == 1.0);
}

TEST_CASE("additive noise telescopes") {
    const Scenario s = scenario("additive");
    const GridPath w = s.omega();
    const SolveReport rep = picard_solve(s.coeffs(), s.initial(), w, s.config);
    double err = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k)
        err = std::max(err, std::abs(rep.solution.at(k + 256)[0] - (0.5 + 0.15 * w.at(k)[0])));
    CHECK(err <= 1e-12);
}

TEST_CASE("Picard on a scenario: residuals, sweeps, ball, Euler") {
    const Scenario s = scenario("sin_delay");
    const GridPath w = s.omega();
    const SolveReport rep = picard_solve(s.coeffs(), s.initial(), w, s.config);
    CHECK(rep.solution.size() == 1281);
    CHECK(rep.ball_violations == 0);
    CHECK(rep.partition.N <= stopping_count_bound(rep.partition, w, 1.0));
    for (const WindowStats& ws : rep.windows) {
        CHECK(ws.residual <= s.config.picard_tol);
        CHECK(ws.max_ratio <= s.config.mu);
        const auto cells = static_cast<std::size_t>(std::llround((ws.t_end - ws.t_start) / s.config.mesh));
        CHECK(ws.iterations <= cells + 2);
    }
    const GridPath eu = euler_solve(s.coeffs(), s.initial(), w, s.config);
    double gap = 0.0;
    for (std::size_t i = 0; i < eu.values().size(); ++i)
        gap = std::max(gap, std::abs(eu.values()[i] - rep.solution.values()[i]));
    CHECK(gap <= 1e-12);
    const UniquenessReport u = uniqueness_probe(s.coeffs(), s.initial(), w, s.config);
    CHECK(u.passed);
    CHECK(u.inits.size() == 3);
}

TEST_CASE("growth bound on every built-in scenario") {
    for (const char* name : {"zero", "sin_delay", "linear_delay", "logistic", "exp_decay", "additive"}) {
        const Scenario s = scenario(name);
        const SolveReport rep = picard_solve(s.coeffs(), s.initial(), s.omega(), s.config);
        const BoundCheck b = growth_bound_check(rep, s.initial(), s.config);
        CHECK_MESSAGE(b.passed, name);
        CHECK(b.min_margin >= 0.0);
    }
}

TEST_CASE("Gronwall propagation") {
    const Scenario s = scenario("sin_delay");
    const GridPath w = s.omega();
    const SolveReport rep = picard_solve(s.coeffs(), s.initial(), w, s.config);
    const double A = holder_seminorm(rep.solution, s.config.beta, {0.0, 1.0}).seminorm;
    const GronwallReport g = gronwall_check(rep.solution, A, 0.5, w, s.config, 0.2);
    CHECK(g.hypothesis_holds);
    CHECK(g.conclusion.passed);
    const GronwallReport tight = gronwall_check(rep.solution, 0.0, 1e-9, w, s.config, 1e-10);
    CHECK_FALSE(tight.hypothesis_holds);
    CHECK_THROWS_AS(gronwall_check(rep.solution, A, 1.0, w, s.config, 0.6), DomainError);
}

TEST_CASE("segment norm profile starts at the history") {
    const Scenario s = scenario("zero");
    const SolveReport rep = picard_solve(s.coeffs(), s.initial(), s.omega(), s.config);
    const auto prof = segment_norm_profile(rep.solution, s.config.beta, s.config.cells_r());
    CHECK(prof.size() == 1025);
    CHECK(prof.front() == doctest::Approx(holder_norm(s.initial().view(), s.config.beta)));
    CHECK(rep.partition.degenerate);
}
