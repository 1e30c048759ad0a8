#include "ydde/cli.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ydde/emit.hpp"
#include "ydde/error.hpp"
#include "ydde/norms.hpp"
#include "ydde/scenario.hpp"
#include "ydde/sensitivity.hpp"
#include "ydde/solver.hpp"
#include "ydde/verify.hpp"

namespace ydde::cli {

namespace {

struct Common {
    std::string scenario;
    std::optional<std::uint64_t> seed;
    std::optional<double> mesh;
    std::string out;
    std::string format = "csv";
    bool quiet = false;
    bool error_json = false;

    std::filesystem::path out_dir() const {
        if (!out.empty()) return out;
        if (const char* env = std::getenv("YDDE_OUT"); env && *env) return env;
        return "ydde-out";
    }
    Format fmt() const { return format_from_string(format); }
    Scenario load() const {
        if (scenario.empty()) throw DomainError("--scenario is required");
        Scenario s = load_scenario(scenario);
        apply_overrides(s, seed, mesh);
        return s;
    }
    void say(const std::string& line) const {
        if (!quiet) std::cout << line << '\n';
    }
    void timing(const std::string& what, double seconds) const {
        if (!quiet) std::fprintf(stderr, "%s: %.3f s\n", what.c_str(), seconds);
    }
};

void add_common(CLI::App* sub, Common& c, bool needs_scenario = true) {
    auto* opt = sub->add_option("--scenario", c.scenario, "Scenario JSON file");
    if (needs_scenario) opt->required();
    sub->add_option("--seed", c.seed, "Driver seed (overrides the scenario)");
    sub->add_option("--mesh", c.mesh, "Grid mesh (overrides the scenario)");
    sub->add_option("--out", c.out, "Output directory (default $YDDE_OUT or ./ydde-out)");
    sub->add_option("--format", c.format, "Table format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_flag("--quiet", c.quiet, "No summary on stdout");
    sub->add_flag("--error-json", c.error_json, "Report errors as JSON on stdout");
}

std::string fmt(double v) { return format_double(v); }

int cmd_solve(const Common& c) {
    const Scenario s = c.load();
    const CoefficientSet coeffs = s.coeffs();
    const Segment eta = s.initial();
    const SolveReport rep = picard_solve(coeffs, eta, s.omega(), s.config);
    const BoundCheck growth = growth_bound_check(rep, eta, s.config);
    const auto dir = c.out_dir();
    emit(solution_table(rep.solution), dir, "solution", c.fmt());
    emit(partition_table(rep.partition), dir, "partition", c.fmt());
    emit(window_table(rep.windows), dir, "windows", c.fmt());
    emit(bound_table(growth), dir, "growth", c.fmt());
    emit_json({{"scenario", to_json(s)},
               {"C", rep.C},
               {"N", rep.partition.N},
               {"windows", rep.windows.size()},
               {"ball_violations", rep.ball_violations},
               {"nu_seminorm", rep.nu_seminorm},
               {"warnings", rep.warnings},
               {"growth", {{"passed", growth.passed}, {"min_margin", growth.min_margin}}}},
              dir, "solve");
    c.timing("solve", rep.wall_seconds);
    c.say("N = " + std::to_string(rep.partition.N) + ", windows = " + std::to_string(rep.windows.size()) +
          ", growth bound " + (growth.passed ? "holds" : "VIOLATED") + " (min margin " + fmt(growth.min_margin) + ")");
    for (const auto& w : rep.warnings) c.say("warning: " + w);
    return growth.passed ? kOk : kCheckFailed;
}

int cmd_partition(const Common& c, std::optional<double> C_override) {
    const Scenario s = c.load();
    const GridPath omega = s.omega();
    double C = 0.0;
    if (C_override) {
        C = *C_override;
    } else {
        C = compute_contraction_constants(s.coeffs(), s.config).C;
    }
    const GreedyPartition p = greedy_partition(omega, s.config, C);
    const double bound = stopping_count_bound(p, omega, s.config.T);
    nlohmann::json j{{"N", p.N},         {"C", C},       {"mu", p.mu}, {"beta", p.beta}, {"nu", p.nu},
                     {"target", p.target()}, {"count_bound", bound}, {"count_margin", bound - static_cast<double>(p.N)}};
    const double semi = holder_seminorm(omega.view({0, s.config.cells_T()}), s.config.nu).seminorm;
    if (semi == 0.0) {
        const double len = std::pow(p.target(), 1.0 / (1.0 - p.beta));
        j["analytic_window"] = len;
        j["analytic_N"] = std::floor(s.config.T / len);
    }
    const auto dir = c.out_dir();
    emit(partition_table(p), dir, "partition", c.fmt());
    emit_json(j, dir, "partition");
    c.say("N = " + std::to_string(p.N) + " (bound " + fmt(bound) + ")");
    if (j.contains("analytic_window"))
        c.say("analytic window " + fmt(j["analytic_window"].get<double>()) + ", analytic N " +
              fmt(j["analytic_N"].get<double>()));
    return static_cast<double>(p.N) <= bound ? kOk : kCheckFailed;
}

// Coarse paths are subsamples of the scenario-mesh driver, so every level
// sees the same driver.
int cmd_converge(const Common& c, std::size_t levels) {
    const Scenario s = c.load();
    if (s.driver.kind == DriverKind::CustomSamples) throw DomainError("converge needs a generated driver");
    if (levels < 2) throw DomainError("converge needs at least two levels");
    const CoefficientSet coeffs = s.coeffs();
    const GridPath fine = s.omega();
    const GridPath ref = euler_solve(coeffs, s.initial(), fine, s.config);
    const std::size_t R = s.config.cells_r();

    Table t{{"mesh", "err_picard", "err_euler", "picard_euler_gap", "order_picard"}, {}};
    std::vector<double> errs;
    for (std::size_t l = levels; l >= 1; --l) {
        const std::size_t factor = std::size_t{1} << l;
        SolverConfig cfg = s.config;
        cfg.mesh = s.config.mesh * static_cast<double>(factor);
        if (cfg.bisect_tol != 0.0 && cfg.bisect_tol < cfg.mesh) cfg.bisect_tol = 0.0;
        cfg.validate();
        std::vector<double> w;
        for (std::size_t k = 0; k < fine.size(); k += factor) w.push_back(fine.at(k)[0]);
        const GridPath omega = GridPath::scalar(0.0, cfg.mesh, std::move(w));
        const Segment eta = s.eta.build(cfg.r, cfg.mesh, coeffs.dim);
        const GridPath xp = picard_solve(coeffs, eta, omega, cfg).solution;
        const GridPath xe = euler_solve(coeffs, eta, omega, cfg);
        double ep = 0.0, ee = 0.0, gap = 0.0;
        for (std::size_t k = cfg.cells_r(); k < xp.size(); ++k) {
            const auto rv = ref.at(R + (k - cfg.cells_r()) * factor);
            for (std::size_t d = 0; d < coeffs.dim; ++d) {
                ep = std::max(ep, std::abs(xp.at(k)[d] - rv[d]));
                ee = std::max(ee, std::abs(xe.at(k)[d] - rv[d]));
                gap = std::max(gap, std::abs(xp.at(k)[d] - xe.at(k)[d]));
            }
        }
        const double order = errs.empty() || ep == 0.0 ? std::nan("") : std::log2(errs.back() / ep);
        errs.push_back(ep);
        t.rows.push_back({cfg.mesh, ep, ee, gap, order});
    }
    const double target = std::min(1.0, s.config.beta + s.config.nu - 1.0);
    double overall = std::nan("");
    bool ok = true;
    if (errs.back() > 0.0) {
        overall = std::log2(errs.front() / errs.back()) / static_cast<double>(errs.size() - 1);
        ok = overall >= target;
    } else {
        ok = errs.front() == 0.0;
    }
    for (std::size_t i = 1; i < errs.size(); ++i)
        if (errs[i] > errs[i - 1]) ok = false;
    const auto dir = c.out_dir();
    emit(t, dir, "converge", c.fmt());
    emit_json({{"order", overall}, {"required_order", target}, {"passed", ok}}, dir, "converge");
    c.say("observed order " + fmt(overall) + " (required " + fmt(target) + ")");
    return ok ? kOk : kCheckFailed;
}

int cmd_sensitivity(const Common& c, const std::vector<double>& eps) {
    const Scenario s = c.load();
    const VerifyLimits lim;
    const CoefficientSet coeffs = s.coeffs();
    const GridPath omega = s.omega();
    const Segment eta = s.initial();
    const Segment xi = s.xi();
    const double xi_norm = holder_norm(xi.view(), s.config.beta);
    const auto dir = c.out_dir();

    bool ok = true;
    nlohmann::json j{{"continuity", nlohmann::json::array()}};
    for (std::size_t i = 0; i < lim.perturbations.size(); ++i) {
        const double scale = xi_norm > 0.0 ? lim.perturbations[i] / xi_norm : 0.0;
        const ContinuityReport r = continuity_check(coeffs, eta, axpy(eta, scale, xi), omega, s.config);
        ok = ok && r.passed;
        emit(bound_table(r.pointwise), dir, "continuity_" + std::to_string(i), c.fmt());
        j["continuity"].push_back({{"perturbation", r.perturbation}, {"C", r.C}, {"mu", r.mu},
                                   {"mu_reduced", r.mu_reduced}, {"N_T", r.N_T},
                                   {"min_margin", r.pointwise.min_margin}, {"full_lhs", r.full_lhs},
                                   {"full_rhs", r.full_rhs}, {"passed", r.passed}});
        c.say("continuity at " + fmt(r.perturbation) + ": " + (r.passed ? "holds" : "VIOLATED"));
    }
    const DifferentiabilityReport d = differentiability_check(coeffs, eta, xi, omega, s.config, eps);
    Table t{{"eps", "rho"}, {}};
    for (std::size_t i = 0; i < d.eps.size(); ++i) t.rows.push_back({d.eps[i], d.rho[i]});
    emit(t, dir, "differentiability", c.fmt());
    const bool linear = coeffs.family == "linear_delay";
    const bool dok = linear ? *std::max_element(d.rho.begin(), d.rho.end()) <= lim.linear_remainder : d.passed;
    ok = ok && dok;
    j["differentiability"] = {{"ratio", d.ratio}, {"decreasing", d.decreasing}, {"passed", dok}, {"message", d.message}};
    emit_json(j, dir, "sensitivity");
    c.say("differentiability: " + d.message + " (ratio " + fmt(d.ratio) + ")");
    return ok ? kOk : kCheckFailed;
}

int cmd_counterexample(const Common& c, double beta, double p, const std::vector<std::size_t>& ns) {
    Table t{{"n", "partition_sum", "lower_bound", "exceeds"}, {}};
    bool ok = true;
    double prev = -1.0;
    for (std::size_t n : ns) {
        const double sum = counterexample_growth(beta, p, n);
        const double lb = counterexample_lower_bound(beta, p, n);
        // The sum equals the bound in exact arithmetic; allow one rounding step.
        const bool exceeds = sum >= lb * (1.0 - 1e-12);
        ok = ok && exceeds && sum > prev;
        prev = sum;
        t.rows.push_back({static_cast<double>(n), sum, lb, exceeds ? 1.0 : 0.0});
        char line[160];
        std::snprintf(line, sizeof line, "n = %zu: partition sum %.5g, lower bound %.5g", n, sum, lb);
        c.say(line);
    }
    emit(t, c.out_dir(), "counterexample", c.fmt());
    return ok ? kOk : kCheckFailed;
}

int cmd_verify(const Common& c) {
    const Scenario s = c.load();
    const VerifyReport rep = verify_scenario(s);
    const auto dir = c.out_dir();
    const SolveReport sol = picard_solve(s.coeffs(), s.initial(), s.omega(), s.config);
    emit(solution_table(sol.solution), dir, "solution", c.fmt());
    emit(partition_table(sol.partition), dir, "partition", c.fmt());
    emit_json(rep.to_json(), dir, "verify");
    for (const auto& ch : rep.checks) c.say((ch.passed ? "PASS " : "FAIL ") + ch.name);
    return rep.passed() ? kOk : kCheckFailed;
}

int cmd_ensemble(const Common& c, std::size_t seeds, std::size_t threads) {
    const Scenario s = c.load();
    const CoefficientSet coeffs = s.coeffs();
    const Segment eta = s.initial();
    std::optional<FbmGenerator> gen;
    if (s.driver.kind == DriverKind::Fbm) gen.emplace(s.driver.hurst, s.config.T, s.config.mesh);
    const GridPath fixed = gen ? GridPath{} : s.omega();

    struct Row {
        std::size_t N = 0;
        double margin = 0.0;
        bool passed = false;
        std::string error;
    };
    std::vector<Row> rows(seeds);
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t i = next++; i < seeds; i = next++) {
            try {
                const GridPath omega = gen ? gen->sample(s.driver.seed + i) : fixed;
                const SolveReport rep = picard_solve(coeffs, eta, omega, s.config);
                const BoundCheck g = growth_bound_check(rep, eta, s.config);
                rows[i] = {rep.partition.N, g.min_margin, g.passed, {}};
            } catch (const std::exception& e) {
                rows[i].error = e.what();
            }
        }
    };
    threads = std::max<std::size_t>(1, std::min(threads, seeds));
    std::vector<std::thread> pool;
    for (std::size_t k = 0; k + 1 < threads; ++k) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    Table t{{"seed", "N", "min_margin", "passed"}, {}};
    bool ok = true;
    double worst = std::numeric_limits<double>::infinity();
    nlohmann::json errors = nlohmann::json::array();
    for (std::size_t i = 0; i < seeds; ++i) {
        const Row& r = rows[i];
        if (!r.error.empty()) errors.push_back({{"seed", s.driver.seed + i}, {"error", r.error}});
        ok = ok && r.passed;
        worst = std::min(worst, r.margin);
        t.rows.push_back({static_cast<double>(s.driver.seed + i), static_cast<double>(r.N), r.margin, r.passed ? 1.0 : 0.0});
    }
    const auto dir = c.out_dir();
    emit(t, dir, "ensemble", c.fmt());
    emit_json({{"seeds", seeds}, {"min_margin", worst}, {"passed", ok}, {"errors", errors}}, dir, "ensemble");
    c.say("growth bound over " + std::to_string(seeds) + " seeds: " + (ok ? "holds" : "VIOLATED") +
          " (min margin " + fmt(worst) + ")");
    return ok ? kOk : kCheckFailed;
}

void report_error(const Common& c, const char* kind, const std::exception& e, const ConvergenceError* ce) {
    std::cerr << "error: " << e.what() << '\n';
    if (!c.error_json) return;
    nlohmann::json j{{"error", kind}, {"message", e.what()}};
    if (ce) {
        j["window_start"] = ce->window_start();
        j["window_end"] = ce->window_end();
        j["residuals"] = ce->residuals();
    }
    std::cout << j.dump() << '\n';
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"Pathwise solver for Young delay differential equations", "ydde"};
    app.require_subcommand(1);
    Common c;

    auto* solve = app.add_subcommand("solve", "Solve a scenario and check the growth bound");
    add_common(solve, c);

    std::optional<double> C_override;
    auto* partition = app.add_subcommand("partition", "Greedy stopping times and their count bound");
    add_common(partition, c);
    partition->add_option("--C", C_override, "Window constant (default: from the coefficients)");

    std::size_t levels = 3;
    auto* converge = app.add_subcommand("converge", "Mesh ladder against the scenario-mesh solution");
    add_common(converge, c);
    converge->add_option("--levels", levels, "Coarse levels (mesh * 2^k, k = levels..1)");

    std::vector<double> eps{1e-1, 1e-2, 1e-3};
    auto* sens = app.add_subcommand("sensitivity", "Continuity and differentiability in the initial segment");
    add_common(sens, c);
    sens->add_option("--eps", eps, "Decreasing eps ladder");

    double beta = 0.4, p = 2.0;
    std::vector<std::size_t> ns{100, 1000, 10000};
    auto* counter = app.add_subcommand("counterexample", "Partition sums of t -> |t|^beta segments");
    add_common(counter, c, false);
    counter->add_option("--beta", beta, "Hölder exponent");
    counter->add_option("--p", p, "Variation exponent");
    counter->add_option("--n", ns, "Partition sizes");

    auto* verify = app.add_subcommand("verify", "Run the full property suite on a scenario");
    add_common(verify, c);

    std::size_t seeds = 20;
    std::size_t threads = std::max(1u, std::thread::hardware_concurrency());
    auto* ensemble = app.add_subcommand("ensemble", "Growth-bound margins over many driver seeds");
    add_common(ensemble, c);
    ensemble->add_option("--seeds", seeds, "Number of seeds, starting at the scenario seed");
    ensemble->add_option("--threads", threads, "Worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        if (*solve) return cmd_solve(c);
        if (*partition) return cmd_partition(c, C_override);
        if (*converge) return cmd_converge(c, levels);
        if (*sens) return cmd_sensitivity(c, eps);
        if (*counter) return cmd_counterexample(c, beta, p, ns);
        if (*verify) return cmd_verify(c);
        if (*ensemble) return cmd_ensemble(c, seeds, threads);
    } catch (const DomainError& e) {
        report_error(c, "domain", e, nullptr);
        return kConfigError;
    } catch (const ConvergenceError& e) {
        report_error(c, "convergence", e, &e);
        return kCheckFailed;
    } catch (const GenerationError& e) {
        report_error(c, "generation", e, nullptr);
        return kCheckFailed;
    } catch (const std::exception& e) {
        report_error(c, "runtime", e, nullptr);
        return kCheckFailed;
    }
    return kConfigError;
}

}  // namespace ydde::cli
