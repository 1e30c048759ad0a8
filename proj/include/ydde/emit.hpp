#pragma once

// Artifact writers. Output depends only on the data: doubles go out with 17
// significant digits in CSV and as shortest round-trip literals in JSON,
// and nothing time- or host-dependent is written.

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "ydde/grid_path.hpp"
#include "ydde/solver.hpp"

namespace ydde {

enum class Format { Csv, Json };

Format format_from_string(const std::string& s);

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

/// %.17g
std::string format_double(double v);

std::string to_csv(const Table& t);
nlohmann::json to_json(const Table& t);

/// Columns t, x0, x1, ...
Table solution_table(const GridPath& path);
/// Columns i, t_start, t_end, residual, overshoot
Table partition_table(const GreedyPartition& p);
/// Columns t_start, t_end, N, lhs, rhs, margin
Table bound_table(const BoundCheck& b);
/// Columns t_start, t_end, iterations, residual, max_ratio, ball_radius, max_iterate_norm, bisected
Table window_table(const std::vector<WindowStats>& w);

/// Writes dir/stem.csv or dir/stem.json; creates dir. Returns the path.
std::filesystem::path emit(const Table& t, const std::filesystem::path& dir, const std::string& stem, Format f);
/// Writes pretty-printed JSON with a trailing newline.
std::filesystem::path emit_json(const nlohmann::json& j, const std::filesystem::path& dir, const std::string& stem);

}  // namespace ydde
