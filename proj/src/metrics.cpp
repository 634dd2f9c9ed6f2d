#include "trackswept/metrics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

namespace trackswept {

int point_match(Vec2 a, Vec2 b, const MatchConfig& cfg) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy <= cfg.lambda * cfg.lambda ? 1 : 0;
}

int track_match(Vec2 d, const std::vector<Vec2>& track_points, const MatchConfig& cfg) {
    for (const Vec2& p : track_points)
        if (point_match(d, p, cfg)) return 1;
    return 0;
}

LevelMetrics rates_from_counts(CountSet counts) {
    LevelMetrics m;
    m.counts = counts;
    const long long rd = counts.tp + counts.fn_;
    const long long pd = counts.tp + counts.fp;
    m.zero_gt = rd == 0;
    m.zero_pred = pd == 0;
    m.recall = rd == 0 ? 0.0 : static_cast<double>(counts.tp) / static_cast<double>(rd);
    m.precision = pd == 0 ? 0.0 : static_cast<double>(counts.tp) / static_cast<double>(pd);
    const double denom = m.recall + m.precision;
    m.f1 = denom == 0.0 ? 0.0 : 2.0 * m.recall * m.precision / denom;
    return m;
}

MetricsReport report_from_counts(CountSet tau, CountSet d, double lambda) {
    MetricsReport r;
    r.track_level = rates_from_counts(tau);
    r.point_level = rates_from_counts(d);
    r.lambda = lambda;
    return r;
}

MetricsReport score(const TrackSet& gt, const TrackSet& pred, const PointSet& points,
                    const MatchConfig& cfg) {
    if (!(cfg.lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
    auto coords = [&](const Track& t) {
        std::vector<Vec2> out;
        out.reserve(t.point_ids.size());
        for (int id : t.point_ids) out.push_back({points.points[id].x, points.points[id].y});
        return out;
    };
    std::vector<std::vector<Vec2>> gt_pts, pred_pts;
    for (const Track& t : gt.tracks) gt_pts.push_back(coords(t));
    for (const Track& t : pred.tracks) pred_pts.push_back(coords(t));

    CountSet tau, d;

    // track level: a GT track is detected when any of its points matches any
    // returned track; a returned track is false when none of its points
    // matches any GT track
    for (const auto& g : gt_pts) {
        bool detected = false;
        for (const auto& p : pred_pts) {
            for (const Vec2& dstar : g)
                if (track_match(dstar, p, cfg)) {
                    detected = true;
                    break;
                }
            if (detected) break;
        }
        tau.tp += detected ? 1 : 0;
    }
    tau.fn_ = static_cast<long long>(gt_pts.size()) - tau.tp;
    for (const auto& p : pred_pts) {
        bool any = false;
        for (const auto& g : gt_pts) {
            for (const Vec2& dprime : p)
                if (track_match(dprime, g, cfg)) {
                    any = true;
                    break;
                }
            if (any) break;
        }
        tau.fp += any ? 0 : 1;
    }

    // point level
    long long gt_total = 0;
    for (const auto& g : gt_pts) {
        gt_total += static_cast<long long>(g.size());
        for (const Vec2& dstar : g) {
            bool matched = false;
            for (const auto& p : pred_pts)
                if (track_match(dstar, p, cfg)) {
                    matched = true;
                    break;
                }
            d.tp += matched ? 1 : 0;
        }
    }
    d.fn_ = gt_total - d.tp;
    for (const auto& p : pred_pts)
        for (const Vec2& dprime : p) {
            bool matched = false;
            for (const auto& g : gt_pts)
                if (track_match(dprime, g, cfg)) {
                    matched = true;
                    break;
                }
            d.fp += matched ? 0 : 1;
        }

    return report_from_counts(tau, d, cfg.lambda);
}

std::string method_name(Method m) {
    switch (m) {
        case Method::TS: return "ts";
        case Method::PS: return "ps";
        case Method::RANSAC: return "ransac";
        case Method::HOUGH: return "hough";
        case Method::NAIVE: return "naive";
    }
    return "ts";
}

Method method_from_name(const std::string& name) {
    if (name == "ts") return Method::TS;
    if (name == "ps") return Method::PS;
    if (name == "ransac") return Method::RANSAC;
    if (name == "hough") return Method::HOUGH;
    if (name == "naive") return Method::NAIVE;
    throw std::invalid_argument("unknown method '" + name + "'");
}

BenchTable bench_scaling(const std::vector<int>& sizes, const BenchSceneTemplate& tmpl,
                         const std::vector<Method>& methods, int repeats, unsigned seed,
                         double timeout_seconds) {
    if (repeats < 1) throw std::invalid_argument("repeats must be >= 1");
    for (std::size_t i = 1; i < sizes.size(); ++i)
        if (sizes[i] <= sizes[i - 1]) throw std::invalid_argument("sizes must ascend");

    BenchTable table;
    std::map<std::string, std::vector<std::pair<double, double>>> loglog;

    for (int n : sizes) {
        SceneConfig sc;
        sc.targets = tmpl.targets;
        if (tmpl.points_per_frame > 0) {
            sc.frames = std::max(3, n / tmpl.points_per_frame);
            sc.clutter_per_frame = std::max(0, tmpl.points_per_frame - tmpl.targets);
        } else {
            sc.frames = tmpl.frames;
            sc.clutter_per_frame =
                std::max(0, (n - tmpl.targets * tmpl.frames) / std::max(1, tmpl.frames));
        }
        const double scale =
            tmpl.size_anchor > 0 ? static_cast<double>(n) / tmpl.size_anchor : 1.0;
        sc.width = tmpl.width * scale;
        sc.height = tmpl.height * scale;
        sc.jitter_sigma = tmpl.jitter_sigma;
        sc.speed_min = tmpl.speed_min;
        sc.speed_max = tmpl.speed_max;
        sc.seed = seed + static_cast<unsigned>(n);
        GeneratedScene scene = generate_scene(sc);

        for (Method m : methods) {
            BenchCell cell;
            cell.method = method_name(m);
            cell.n = static_cast<int>(scene.points.size());
            DetectorConfig dc;
            dc.eps1 = tmpl.eps1;
            dc.eps2 = tmpl.eps2;
            dc.method = m;
            dc.ransac.inlier_eps = tmpl.eps1;
            dc.ransac.seed = seed;
            dc.hough.inlier_eps = tmpl.eps1;

            std::vector<double> times;
            bool missing = false;
            for (int r = 0; r < repeats; ++r) {
                const auto start = std::chrono::steady_clock::now();
                try {
                    (void)find_all_tracks(scene.points, dc);
                } catch (const TooLarge&) {
                    missing = true;  // naive guard refusal
                    break;
                }
                const std::chrono::duration<double> dt =
                    std::chrono::steady_clock::now() - start;
                times.push_back(dt.count());
                if (dt.count() > timeout_seconds) {
                    missing = true;
                    break;
                }
            }
            if (missing || times.empty()) {
                cell.missing = true;
            } else {
                std::sort(times.begin(), times.end());
                cell.median_seconds = times[times.size() / 2];
                loglog[cell.method].push_back(
                    {std::log(static_cast<double>(cell.n)), std::log(cell.median_seconds)});
            }
            table.cells.push_back(cell);
        }
    }

    for (auto& [method, pts] : loglog) {
        if (pts.size() < 2) continue;
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (auto& [x, y] : pts) {
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        const double k = static_cast<double>(pts.size());
        const double denom = k * sxx - sx * sx;
        if (denom > 1e-12) table.slopes[method] = (k * sxy - sx * sy) / denom;
    }
    return table;
}

std::string bench_table_csv(const BenchTable& table) {
    std::ostringstream out;
    out << "method,n,median_seconds,slope_fit\n";
    out.setf(std::ios::fmtflags(0), std::ios::floatfield);
    out.precision(9);
    for (const BenchCell& c : table.cells) {
        out << c.method << ',' << c.n << ',';
        if (c.missing)
            out << "NA";
        else
            out << c.median_seconds;
        out << ",\n";
    }
    for (const auto& [method, slope] : table.slopes)
        out << method << ",slope,," << slope << '\n';
    return out.str();
}

BenchTable parse_bench_csv(const std::string& text) {
    BenchTable table;
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "method,n,median_seconds,slope_fit")
        throw ParseError("bad bench csv header", 1, 1);
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string method, nfield, med, slope;
        std::getline(row, method, ',');
        std::getline(row, nfield, ',');
        std::getline(row, med, ',');
        std::getline(row, slope, ',');
        if (nfield == "slope") {
            table.slopes[method] = std::stod(slope);
            continue;
        }
        BenchCell c;
        c.method = method;
        c.n = std::stoi(nfield);
        if (med == "NA")
            c.missing = true;
        else
            c.median_seconds = std::stod(med);
        table.cells.push_back(c);
    }
    return table;
}

}  // namespace trackswept
