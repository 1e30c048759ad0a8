#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "ydde/coefficients.hpp"
#include "ydde/driver.hpp"
#include "ydde/grid_path.hpp"
#include "ydde/solver.hpp"

namespace ydde {

/// Closed-form or sampled segment on [-r, 0].
///   {"form": "constant", "value": v}          v scalar or per-component list
///   {"form": "linear", "value": v, "slope": s} v + s u
///   {"form": "sine", "offset": v, "amplitude": a, "frequency": f}  v + a sin(2 pi f u)
///   {"form": "samples", "values": [...]}      row-major, r/mesh + 1 nodes
struct SegmentSpec {
    std::string form = "constant";
    std::vector<double> value{1.0};
    std::vector<double> slope;
    double amplitude = 1.0;
    double frequency = 1.0;
    std::vector<double> samples;

    Segment build(double delay, double mesh, std::size_t dim) const;
};

SegmentSpec segment_spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SegmentSpec& s);

struct Scenario {
    std::string name;
    nlohmann::json coefficients;  ///< {"family", "params"}, kept raw for re-emission
    DriverSpec driver;
    SegmentSpec eta;
    SegmentSpec direction;        ///< sensitivity direction xi
    SolverConfig config;
    std::vector<std::string> checks;

    CoefficientSet coeffs() const { return coefficients_from_json(coefficients); }
    /// Driver on the solver grid: driver T and mesh follow the config.
    GridPath omega() const;
    Segment initial() const;
    Segment xi() const;
    bool enabled(const std::string& check) const;
};

/// Every check name `verify` knows, in execution order.
const std::vector<std::string>& known_checks();

/// Validates families, forms, check names and config invariants.
Scenario scenario_from_json(const nlohmann::json& j);
Scenario load_scenario(const std::filesystem::path& file);
nlohmann::json to_json(const Scenario& s);

/// Flags override scenario fields; the mesh applies to driver and solver.
void apply_overrides(Scenario& s, std::optional<std::uint64_t> seed, std::optional<double> mesh);

}  // namespace ydde
