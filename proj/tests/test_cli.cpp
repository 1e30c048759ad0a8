#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

#include "ydde/cli.hpp"
#include "ydde/emit.hpp"
#include "ydde/error.hpp"
#include "ydde/scenario.hpp"

namespace fs = std::filesystem;

namespace {

int run(std::vector<std::string> args) {
    args.insert(args.begin(), "ydde");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    return ydde::cli::run(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("ydde-test-" + name);
    fs::remove_all(p);
    return p;
}

const std::string kScenarios = YDDE_SCENARIO_DIR;

}  // namespace

TEST_CASE("csv and json tables") {
    ydde::Table t{{"a", "b"}, {{1.0, 0.1}, {2.5, -3.0}}};
    CHECK(ydde::to_csv(t) == "a,b\n1,0.10000000000000001\n2.5,-3\n");
    CHECK(ydde::to_json(t)["rows"][1][0] == 2.5);
    CHECK_THROWS_AS(ydde::format_from_string("xml"), ydde::DomainError);
}

TEST_CASE("solve writes one row per grid node") {
    const fs::path out = scratch("solve");
    CHECK(run({"solve", "--scenario", kScenarios + "/sin_delay.json", "--out", out.string(), "--quiet"}) ==
          ydde::cli::kOk);
    std::ifstream in(out / "solution.csv");
    std::size_t lines = 0;
    for (std::string l; std::getline(in, l);) ++lines;
    CHECK(lines == 1 + 1280 + 1);  // header + (T + r) / mesh + 1
    CHECK(fs::exists(out / "partition.csv"));
    CHECK(fs::exists(out / "growth.csv"));
}

TEST_CASE("verify reruns are byte-identical") {
    const fs::path a = scratch("verify-a"), b = scratch("verify-b");
    const std::string sc = kScenarios + "/logistic.json";
    CHECK(run({"verify", "--scenario", sc, "--out", a.string(), "--quiet"}) == ydde::cli::kOk);
    CHECK(run({"verify", "--scenario", sc, "--out", b.string(), "--quiet"}) == ydde::cli::kOk);
    for (const char* f : {"verify.json", "solution.csv", "partition.csv"}) CHECK(slurp(a / f) == slurp(b / f));
    CHECK(slurp(a / "verify.json").find("\"passed\": true") != std::string::npos);
}

TEST_CASE("json format") {
    const fs::path out = scratch("json");
    CHECK(run({"partition", "--scenario", kScenarios + "/sin_delay.json", "--out", out.string(), "--format", "json",
               "--quiet"}) == ydde::cli::kOk);
    std::ifstream in(out / "partition.json");
    const auto j = nlohmann::json::parse(in);
    CHECK(j.is_object());
}

TEST_CASE("usage and configuration errors exit with 2") {
    const fs::path out = scratch("errors");
    CHECK(run({"solve", "--scenario", "/nonexistent.json", "--out", out.string(), "--quiet"}) ==
          ydde::cli::kConfigError);
    CHECK(run({"frobnicate"}) == ydde::cli::kConfigError);
    CHECK(run({"solve", "--scenario", kScenarios + "/zero.json", "--format", "xml"}) == ydde::cli::kConfigError);
    CHECK(run({"solve", "--scenario", kScenarios + "/zero.json", "--mesh", "0.3", "--out", out.string(),
               "--quiet"}) == ydde::cli::kConfigError);
}

TEST_CASE("scenario round trip and overrides") {
    ydde::Scenario s = ydde::load_scenario(kScenarios + "/linear_delay.json");
    const ydde::Scenario back = ydde::scenario_from_json(ydde::to_json(s));
    CHECK(back.name == s.name);
    CHECK(back.driver.seed == s.driver.seed);
    ydde::apply_overrides(s, 99, 1.0 / 512);
    CHECK(s.driver.seed == 99);
    CHECK(s.config.mesh == 1.0 / 512);
    CHECK(s.omega().size() == 513);
    auto j = ydde::to_json(s);
    j["checks"] = {"telepathy"};
    CHECK_THROWS_AS(ydde::scenario_from_json(j), ydde::DomainError);
}
