#include "ydde/emit.hpp"

#include <cstdio>
#include <fstream>

#include "ydde/error.hpp"

namespace ydde {

Format format_from_string(const std::string& s) {
    if (s == "csv") return Format::Csv;
    if (s == "json") return Format::Json;
    throw DomainError("unknown format: " + s);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string to_csv(const Table& t) {
    std::string out;
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
        if (c) out += ',';
        out += t.columns[c];
    }
    out += '\n';
    for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            out += format_double(row[c]);
        }
        out += '\n';
    }
    return out;
}

nlohmann::json to_json(const Table& t) {
    return {{"columns", t.columns}, {"rows", t.rows}};
}

Table solution_table(const GridPath& path) {
    Table t;
    t.columns.push_back("t");
    for (std::size_t c = 0; c < path.dim(); ++c) t.columns.push_back("x" + std::to_string(c));
    t.rows.reserve(path.size());
    for (std::size_t k = 0; k < path.size(); ++k) {
        std::vector<double> row{path.time(k)};
        for (double v : path.at(k)) row.push_back(v);
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table partition_table(const GreedyPartition& p) {
    Table t{{"i", "t_start", "t_end", "residual", "overshoot"}, {}};
    for (std::size_t i = 0; i < p.windows(); ++i)
        t.rows.push_back({static_cast<double>(i), p.times[i], p.times[i + 1], p.residuals[i], p.overshoots[i]});
    return t;
}

Table bound_table(const BoundCheck& b) {
    Table t{{"t_start", "t_end", "N", "lhs", "rhs", "margin"}, {}};
    for (const auto& r : b.rows)
        t.rows.push_back({r.t_start, r.t_end, static_cast<double>(r.N), r.lhs, r.rhs, r.margin()});
    return t;
}

Table window_table(const std::vector<WindowStats>& w) {
    Table t{{"t_start", "t_end", "iterations", "residual", "max_ratio", "ball_radius", "max_iterate_norm", "bisected"},
            {}};
    for (const auto& s : w)
        t.rows.push_back({s.t_start, s.t_end, static_cast<double>(s.iterations), s.residual, s.max_ratio,
                          s.ball_radius, s.max_iterate_norm, s.bisected ? 1.0 : 0.0});
    return t;
}

namespace {

std::filesystem::path write_text(const std::string& text, const std::filesystem::path& dir, const std::string& file) {
    std::filesystem::create_directories(dir);
    const auto path = dir / file;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed for " + path.string());
    return path;
}

}  // namespace

std::filesystem::path emit(const Table& t, const std::filesystem::path& dir, const std::string& stem, Format f) {
    if (f == Format::Csv) return write_text(to_csv(t), dir, stem + ".csv");
    return write_text(to_json(t).dump(2) + "\n", dir, stem + ".json");
}

std::filesystem::path emit_json(const nlohmann::json& j, const std::filesystem::path& dir, const std::string& stem) {
    return write_text(j.dump(2) + "\n", dir, stem + ".json");
}

}  // namespace ydde
