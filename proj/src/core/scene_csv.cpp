#include "tcd/core/scene_csv.hpp"

#include "tcd/core/error.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string_view>

namespace tcd {
namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            cells.push_back(line.substr(start));
            break;
        }
        cells.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return cells;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

double parse_cell(std::string_view cell, std::size_t line) {
    cell = trim(cell);
    if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size()) {
        throw ParseError("non-numeric cell '" + std::string(cell) + "'", line);
    }
    return v;
}

Variant infer_variant(const std::vector<std::string>& names) {
    for (const auto& n : names) {
        if (n.size() < 2 || n.compare(n.size() - 2, 2, ".a") != 0) return Variant::Velocity;
    }
    return Variant::Acceleration;
}

}  // namespace

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

TimeSeriesScene parse_scene_csv(const std::string& text, const std::string& scene_id,
                                double sample_rate_hz, std::optional<Variant> variant) {
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> names;
    while (std::getline(in, line)) {
        ++line_no;
        auto t = trim(line);
        if (t.empty()) continue;
        if (line_no == 1 && t.size() >= 3 && t.substr(0, 3) == "\xEF\xBB\xBF") t.remove_prefix(3);
        for (auto cell : split_commas(t)) names.emplace_back(trim(cell));
        break;
    }
    if (names.empty()) throw ParseError("missing header row in " + scene_id);

    std::vector<double> flat;
    Eigen::Index rows = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto t = trim(line);
        if (t.empty()) continue;
        auto cells = split_commas(t);
        if (cells.size() != names.size()) {
            throw ParseError("row has " + std::to_string(cells.size()) + " cells, header has " +
                                 std::to_string(names.size()),
                             line_no);
        }
        for (auto c : cells) flat.push_back(parse_cell(c, line_no));
        ++rows;
    }
    if (rows == 0) throw ParseError("scene " + scene_id + " has an empty body");

    const auto cols = static_cast<Eigen::Index>(names.size());
    Matrix values = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        flat.data(), rows, cols);
    const Variant v = variant.value_or(infer_variant(names));
    try {
        return TimeSeriesScene(scene_id, std::move(names), sample_rate_hz, std::move(values), v);
    } catch (const InvalidArgument& e) {
        throw ParseError(e.what());
    }
}

TimeSeriesScene load_scene_csv(const std::filesystem::path& path, double sample_rate_hz,
                               std::optional<Variant> variant) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open scene file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_scene_csv(buf.str(), path.stem().string(), sample_rate_hz, variant);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

std::string format_scene_csv(const TimeSeriesScene& scene) {
    std::string out;
    const auto& names = scene.variable_names();
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) out += ',';
        out += names[i];
    }
    out += '\n';
    const auto& m = scene.values();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c) out += ',';
            out += format_double(m(r, c));
        }
        out += '\n';
    }
    return out;
}

void save_scene_csv(const TimeSeriesScene& scene, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write scene file " + path.string());
    out << format_scene_csv(scene);
    if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace tcd
