#include "trackswept/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace trackswept {

namespace {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_double(const std::string& s, int line, int col) {
    try {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ParseError("expected a real number, got '" + s + "'", line, col);
    }
}

int parse_int(const std::string& s, int line, int col) {
    try {
        std::size_t used = 0;
        int v = std::stoi(s, &used);
        if (used != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ParseError("expected an integer, got '" + s + "'", line, col);
    }
}

}  // namespace

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path.string(), 0, 0);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

PointSet read_points_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string(), 0, 0);
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty points file", 1, 1);
    auto header = split_csv_row(line);
    const std::vector<std::string> expected{"frame", "x", "y"};
    for (std::size_t i = 0; i < expected.size(); ++i)
        if (i >= header.size() || header[i] != expected[i])
            throw ParseError("points header must name column '" + expected[i] + "'", 1,
                             static_cast<int>(i + 1));

    std::vector<TimedPoint> raw;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto cells = split_csv_row(line);
        if (cells.size() != 3)
            throw ParseError("expected 3 columns", lineno, static_cast<int>(cells.size()));
        TimedPoint p;
        p.t = parse_int(cells[0], lineno, 1);
        p.x = parse_double(cells[1], lineno, 2);
        p.y = parse_double(cells[2], lineno, 3);
        if (p.t < 1) throw ParseError("frame index must be >= 1", lineno, 1);
        raw.push_back(p);
    }
    int dropped = 0;
    PointSet ps = make_point_set(std::move(raw), &dropped);
    if (dropped > 0)
        std::fprintf(stderr, "warning: dropped %d duplicate point(s) from %s\n", dropped,
                     path.string().c_str());
    return ps;
}

void write_points_csv(const std::filesystem::path& path, const PointSet& ps) {
    std::ostringstream out;
    out << "frame,x,y\n";
    for (const TimedPoint& p : ps.points)
        out << p.t << ',' << format_double(p.x) << ',' << format_double(p.y) << '\n';
    write_text_file(path, out.str());
}

nlohmann::json tracks_to_json(const TrackSet& ts, const nlohmann::json& extra_params) {
    nlohmann::json j;
    j["tracks"] = nlohmann::json::array();
    for (const Track& t : ts.tracks) {
        nlohmann::json jt;
        jt["point_ids"] = t.point_ids;
        jt["line_xy"] = {{"m", t.line_xy.m}, {"c", t.line_xy.c}};
        jt["line_tx"] = {{"m", t.line_tx.m}, {"c", t.line_tx.c}};
        jt["residual_xy"] = t.residual_xy;
        jt["residual_tx"] = t.residual_tx;
        jt["axis_swapped"] = t.axis_swapped;
        j["tracks"].push_back(std::move(jt));
    }
    nlohmann::json params;
    params["eps1"] = ts.eps1;
    params["eps2"] = ts.eps2;
    params["min_frames"] = ts.min_frames;
    if (extra_params.is_object())
        for (auto it = extra_params.begin(); it != extra_params.end(); ++it)
            params[it.key()] = it.value();
    j["params"] = std::move(params);
    return j;
}

TrackSet tracks_from_json(const nlohmann::json& j, std::size_t n_points) {
    if (!j.is_object() || !j.contains("tracks") || !j["tracks"].is_array())
        throw SchemaError("tracks json must contain a 'tracks' array");
    TrackSet ts;
    if (j.contains("params") && j["params"].is_object()) {
        const auto& p = j["params"];
        if (p.contains("eps1")) ts.eps1 = p["eps1"].get<double>();
        if (p.contains("eps2")) ts.eps2 = p["eps2"].get<double>();
        if (p.contains("min_frames")) ts.min_frames = p["min_frames"].get<int>();
    }
    for (const auto& jt : j["tracks"]) {
        for (const char* field : {"point_ids", "line_xy", "line_tx", "residual_xy", "residual_tx"})
            if (!jt.contains(field))
                throw SchemaError(std::string("track is missing field '") + field + "'");
        Track t;
        for (const auto& id : jt["point_ids"]) {
            const long long v = id.get<long long>();
            if (v < 0 || v >= static_cast<long long>(n_points))
                throw SchemaError("track references nonexistent point id " + std::to_string(v));
            t.point_ids.push_back(static_cast<int>(v));
        }
        for (const char* field : {"line_xy", "line_tx"}) {
            const auto& jl = jt[field];
            if (!jl.is_object() || !jl.contains("m") || !jl.contains("c"))
                throw SchemaError(std::string("line field '") + field + "' must carry m and c");
        }
        t.line_xy = {jt["line_xy"]["m"].get<double>(), jt["line_xy"]["c"].get<double>()};
        t.line_tx = {jt["line_tx"]["m"].get<double>(), jt["line_tx"]["c"].get<double>()};
        t.residual_xy = jt["residual_xy"].get<double>();
        t.residual_tx = jt["residual_tx"].get<double>();
        t.axis_swapped = jt.value("axis_swapped", false);
        ts.tracks.push_back(std::move(t));
    }
    return ts;
}

void write_tracks_json(const std::filesystem::path& path, const TrackSet& ts,
                       const nlohmann::json& extra_params) {
    write_text_file(path, tracks_to_json(ts, extra_params).dump(2) + "\n");
}

TrackSet read_tracks_json(const std::filesystem::path& path, std::size_t n_points) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_text_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid json: ") + e.what(), 0, 0);
    }
    return tracks_from_json(j, n_points);
}

}  // namespace trackswept
