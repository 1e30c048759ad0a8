#pragma once

// Property suite run by `verify`: every invariant the solver, the
// partition and the sensitivity checks promise, evaluated on one scenario.

#include <string>
#include <vector>

#include "json.hpp"

#include "ydde/scenario.hpp"

namespace ydde {

struct CheckResult {
    std::string name;
    bool passed = false;
    nlohmann::json detail;
};

struct VerifyReport {
    std::string scenario;
    std::vector<CheckResult> checks;

    bool passed() const;
    nlohmann::json to_json() const;
};

/// Tolerances of the suite, fixed so that verdicts are reproducible.
struct VerifyLimits {
    std::size_t regularity_trials = 200;
    std::size_t young_windows = 100;
    double contraction_margin = 0.5;        ///< observed ratio <= mu (1 + margin)
    double euler_factor = 100.0;            ///< sup |picard - euler| <= factor * picard_tol
    std::vector<double> perturbations{1e-1, 1e-2};
    std::vector<double> eps_ladder{1e-1, 1e-2, 1e-3};
    double linear_remainder = 1e-5;         ///< rho bound when g and f are linear
};

VerifyReport verify_scenario(const Scenario& s, const VerifyLimits& limits = {});

}  // namespace ydde
