#include "ydde/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include "ydde/error.hpp"

namespace ydde {

namespace {

std::vector<double> scalar_or_list(const nlohmann::json& j) {
    if (j.is_number()) return {j.get<double>()};
    return j.get<std::vector<double>>();
}

// Broadcasts a one-entry list to dim components.
double component(const std::vector<double>& v, std::size_t c, double fallback) {
    if (v.empty()) return fallback;
    if (v.size() == 1) return v[0];
    return v.at(c);
}

}  // namespace

Segment SegmentSpec::build(double delay, double mesh, std::size_t dim) const {
    const auto check_width = [&](const std::vector<double>& v, const char* what) {
        if (v.size() > 1 && v.size() != dim)
            throw DomainError(std::string("segment ") + what + " must be scalar or have dim entries");
    };
    if (form == "samples") {
        const std::size_t nodes = cells_in(delay, mesh, "delay r") + 1;
        if (samples.size() != nodes * dim) throw DomainError("segment samples must have (r/mesh + 1) * dim values");
        return Segment(delay, mesh, dim, samples);
    }
    check_width(value, "value");
    check_width(slope, "slope");
    if (form == "constant") {
        return Segment::from_function(delay, mesh, dim, [&](double, std::span<double> v) {
            for (std::size_t c = 0; c < dim; ++c) v[c] = component(value, c, 0.0);
        });
    }
    if (form == "linear") {
        return Segment::from_function(delay, mesh, dim, [&](double u, std::span<double> v) {
            for (std::size_t c = 0; c < dim; ++c) v[c] = component(value, c, 0.0) + component(slope, c, 0.0) * u;
        });
    }
    if (form == "sine") {
        return Segment::from_function(delay, mesh, dim, [&](double u, std::span<double> v) {
            const double s = amplitude * std::sin(2.0 * std::numbers::pi * frequency * u);
            for (std::size_t c = 0; c < dim; ++c) v[c] = component(value, c, 0.0) + s;
        });
    }
    throw DomainError("unknown segment form: " + form);
}

SegmentSpec segment_spec_from_json(const nlohmann::json& j) {
    SegmentSpec s;
    s.form = j.value("form", s.form);
    if (j.contains("value")) s.value = scalar_or_list(j.at("value"));
    if (j.contains("offset")) s.value = scalar_or_list(j.at("offset"));
    if (s.form == "sine" && !j.contains("value") && !j.contains("offset")) s.value = {0.0};
    if (j.contains("slope")) s.slope = scalar_or_list(j.at("slope"));
    s.amplitude = j.value("amplitude", s.amplitude);
    s.frequency = j.value("frequency", s.frequency);
    if (j.contains("values")) s.samples = j.at("values").get<std::vector<double>>();
    static const std::vector<std::string> forms{"constant", "linear", "sine", "samples"};
    if (std::find(forms.begin(), forms.end(), s.form) == forms.end())
        throw DomainError("unknown segment form: " + s.form);
    return s;
}

nlohmann::json to_json(const SegmentSpec& s) {
    nlohmann::json j{{"form", s.form}};
    if (s.form == "samples") {
        j["values"] = s.samples;
        return j;
    }
    j[s.form == "sine" ? "offset" : "value"] = s.value;
    if (s.form == "linear") j["slope"] = s.slope;
    if (s.form == "sine") {
        j["amplitude"] = s.amplitude;
        j["frequency"] = s.frequency;
    }
    return j;
}

const std::vector<std::string>& known_checks() {
    static const std::vector<std::string> names{
        "regularity", "young_loeve", "partition",  "fixed_point", "ball",
        "contraction", "euler",      "uniqueness", "growth",      "continuity",
        "differentiability"};
    return names;
}

GridPath Scenario::omega() const {
    DriverSpec d = driver;
    d.T = config.T;
    d.mesh = config.mesh;
    return generate(d);
}

Segment Scenario::initial() const { return eta.build(config.r, config.mesh, coeffs().dim); }
Segment Scenario::xi() const { return direction.build(config.r, config.mesh, coeffs().dim); }

bool Scenario::enabled(const std::string& check) const {
    return std::find(checks.begin(), checks.end(), check) != checks.end();
}

Scenario scenario_from_json(const nlohmann::json& j) {
    Scenario s;
    s.name = j.value("name", std::string("unnamed"));
    s.coefficients = j.at("coefficients");
    (void)coefficients_from_json(s.coefficients);
    s.driver = driver_spec_from_json(j.at("driver"));
    s.config = solver_config_from_json(j.value("config", nlohmann::json::object()));
    s.eta = segment_spec_from_json(j.value("eta", nlohmann::json::object()));
    if (j.contains("direction")) {
        s.direction = segment_spec_from_json(j.at("direction"));
    } else {
        s.direction.form = "sine";
        s.direction.value = {0.0};
    }
    if (j.contains("checks")) {
        s.checks = j.at("checks").get<std::vector<std::string>>();
        for (const auto& c : s.checks)
            if (std::find(known_checks().begin(), known_checks().end(), c) == known_checks().end())
                throw DomainError("unknown check: " + c);
    } else {
        s.checks = known_checks();
    }
    s.config.validate();
    return s;
}

Scenario load_scenario(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw DomainError("cannot open scenario file " + file.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw DomainError("scenario " + file.string() + " is not valid JSON: " + e.what());
    }
    try {
        return scenario_from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw DomainError("scenario " + file.string() + ": " + e.what());
    }
}

nlohmann::json to_json(const Scenario& s) {
    DriverSpec d = s.driver;
    d.T = s.config.T;
    d.mesh = s.config.mesh;
    return {{"name", s.name},           {"coefficients", s.coefficients}, {"driver", to_json(d)},
            {"eta", to_json(s.eta)},    {"direction", to_json(s.direction)},
            {"config", to_json(s.config)}, {"checks", s.checks}};
}

void apply_overrides(Scenario& s, std::optional<std::uint64_t> seed, std::optional<double> mesh) {
    if (seed) s.driver.seed = *seed;
    if (mesh) {
        s.config.mesh = *mesh;
        s.driver.mesh = *mesh;
        if (s.config.bisect_tol != 0.0 && s.config.bisect_tol < *mesh) s.config.bisect_tol = 0.0;
    }
    s.config.validate();
}

}  // namespace ydde
