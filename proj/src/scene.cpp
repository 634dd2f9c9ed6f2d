#include "trackswept/scene.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <tuple>

#include "trackswept/io.hpp"

namespace trackswept {

namespace {

void validate(const SceneConfig& cfg) {
    if (cfg.frames < 1) throw InfeasibleConfig("frames must be >= 1");
    if (cfg.targets < 0 || cfg.clutter_per_frame < 0)
        throw InfeasibleConfig("targets and clutter must be nonnegative");
    if (cfg.width <= 0 || cfg.height <= 0) throw InfeasibleConfig("image size must be positive");
    if (cfg.speed_min > cfg.speed_max || cfg.speed_min < 0)
        throw InfeasibleConfig("invalid speed range");
    if (cfg.dropout_prob < 0 || cfg.dropout_prob >= 1)
        throw InfeasibleConfig("dropout_prob must lie in [0, 1)");
    if (cfg.jitter_sigma < 0) throw InfeasibleConfig("jitter_sigma must be nonnegative");
    if (cfg.targets > 0 && cfg.frames < 3)
        throw InfeasibleConfig("targets need at least 3 frames to form tracks");
}

struct TargetDraw {
    std::vector<TimedPoint> detections;  // t set, x/y set, id unset
};

// eps used to certify generated tracks; small slack over 3 sigma so the
// documented guarantee (feasible at 4 sigma) holds deterministically.
double cert_eps(double sigma) { return sigma > 0 ? 3.5 * sigma : 1e-9; }

TargetDraw draw_target(const SceneConfig& cfg, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> ux(0.0, cfg.width);
    std::uniform_real_distribution<double> uy(0.0, cfg.height);
    std::uniform_real_distribution<double> uang(0.0, 2.0 * M_PI);
    std::uniform_real_distribution<double> uspeed(cfg.speed_min, cfg.speed_max);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::normal_distribution<double> jitter(0.0, cfg.jitter_sigma);

    for (int attempt = 0; attempt < 100; ++attempt) {
        const double sx = ux(rng);
        const double sy = uy(rng);
        const double ang = uang(rng);
        const double speed = uspeed(rng);
        const double vx = speed * std::cos(ang);
        const double vy = speed * std::sin(ang);

        TargetDraw draw;
        bool ok = true;
        for (int f = 1; f <= cfg.frames; ++f) {
            double px = sx + (f - 1) * vx;
            double py = sy + (f - 1) * vy;
            if (cfg.jitter_sigma > 0) {
                px += jitter(rng);
                py += jitter(rng);
            }
            const bool dropped = cfg.dropout_prob > 0 && u01(rng) < cfg.dropout_prob;
            if (dropped) continue;
            if (px < 0 || px > cfg.width || py < 0 || py > cfg.height) {
                ok = false;
                break;
            }
            draw.detections.push_back({0, px, py, f});
        }
        if (!ok || static_cast<int>(draw.detections.size()) < 3) continue;
        const double eps = cert_eps(cfg.jitter_sigma);
        if (!is_feasible(draw.detections, eps, eps).feasible()) continue;
        return draw;
    }
    throw InfeasibleConfig("failed to place a feasible target after 100 attempts");
}

}  // namespace

GeneratedScene generate_scene(const SceneConfig& cfg) {
    validate(cfg);
    std::mt19937_64 rng(cfg.seed);

    std::vector<TargetDraw> targets;
    for (int k = 0; k < cfg.targets; ++k) targets.push_back(draw_target(cfg, rng));

    // clutter per frame, drawn after all targets so ids stay stable per seed
    std::uniform_real_distribution<double> ux(0.0, cfg.width);
    std::uniform_real_distribution<double> uy(0.0, cfg.height);
    std::vector<std::vector<Vec2>> clutter(cfg.frames);
    if (!cfg.streak_clutter) {
        for (int f = 0; f < cfg.frames; ++f)
            for (int c = 0; c < cfg.clutter_per_frame; ++c)
                clutter[f].push_back({ux(rng), uy(rng)});
    } else {
        // residue of imperfectly removed streaks: bursts along short segments
        std::uniform_real_distribution<double> uang(0.0, 2.0 * M_PI);
        std::uniform_real_distribution<double> ulen(15.0, 50.0);
        std::normal_distribution<double> wobble(0.0, 0.3);
        for (int f = 0; f < cfg.frames; ++f) {
            while (static_cast<int>(clutter[f].size()) < cfg.clutter_per_frame) {
                const double bx = ux(rng), by = uy(rng), ang = uang(rng), len = ulen(rng);
                const int burst = 4;
                for (int j = 0; j < burst && static_cast<int>(clutter[f].size()) <
                                                   cfg.clutter_per_frame; ++j) {
                    double px = bx + j * (len / burst) * std::cos(ang) + wobble(rng);
                    double py = by + j * (len / burst) * std::sin(ang) + wobble(rng);
                    px = std::clamp(px, 0.0, cfg.width);
                    py = std::clamp(py, 0.0, cfg.height);
                    clutter[f].push_back({px, py});
                }
            }
        }
    }

    // emit frame-major, targets before clutter; ids follow emission order
    GeneratedScene scene;
    scene.config = cfg;
    std::vector<std::vector<int>> target_ids(targets.size());
    std::set<std::tuple<double, double, int>> seen;
    auto emit = [&](double x, double y, int t) -> int {
        if (!seen.insert({x, y, t}).second) return -1;
        const int id = static_cast<int>(scene.points.points.size());
        scene.points.points.push_back({id, x, y, t});
        scene.points.frame_count = std::max(scene.points.frame_count, t);
        return id;
    };
    for (int f = 1; f <= cfg.frames; ++f) {
        for (std::size_t k = 0; k < targets.size(); ++k)
            for (const TimedPoint& d : targets[k].detections)
                if (d.t == f) {
                    const int id = emit(d.x, d.y, f);
                    if (id >= 0) target_ids[k].push_back(id);
                }
        for (const Vec2& c : clutter[f - 1]) emit(c.x, c.y, f);
    }
    if (scene.points.frame_count < cfg.frames) scene.points.frame_count = cfg.frames;

    const double eps = cert_eps(cfg.jitter_sigma);
    scene.gt.eps1 = eps;
    scene.gt.eps2 = eps;
    scene.gt.min_frames = 3;
    for (auto& ids : target_ids) scene.gt.tracks.push_back(make_track(scene.points, ids));
    return scene;
}

void write_scene(const std::filesystem::path& dir, const GeneratedScene& scene) {
    std::filesystem::create_directories(dir);
    write_points_csv(dir / "points.csv", scene.points);
    nlohmann::json params;
    params["frames"] = scene.config.frames;
    params["width"] = scene.config.width;
    params["height"] = scene.config.height;
    params["targets"] = scene.config.targets;
    params["clutter_per_frame"] = scene.config.clutter_per_frame;
    params["jitter_sigma"] = scene.config.jitter_sigma;
    params["speed_min"] = scene.config.speed_min;
    params["speed_max"] = scene.config.speed_max;
    params["dropout_prob"] = scene.config.dropout_prob;
    params["seed"] = scene.config.seed;
    params["streak_clutter"] = scene.config.streak_clutter;
    write_tracks_json(dir / "gt.json", scene.gt, params);
}

GeneratedScene read_scene(const std::filesystem::path& dir) {
    GeneratedScene scene;
    scene.points = read_points_csv(dir / "points.csv");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_text_file(dir / "gt.json"));
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid gt json: ") + e.what(), 0, 0);
    }
    scene.gt = tracks_from_json(j, scene.points.size());
    if (j.contains("params") && j["params"].is_object()) {
        const auto& p = j["params"];
        scene.config.frames = p.value("frames", scene.points.frame_count);
        scene.config.width = p.value("width", 2048.0);
        scene.config.height = p.value("height", 2048.0);
        scene.config.targets = p.value("targets", static_cast<int>(scene.gt.tracks.size()));
        scene.config.clutter_per_frame = p.value("clutter_per_frame", 0);
        scene.config.jitter_sigma = p.value("jitter_sigma", 0.0);
        scene.config.speed_min = p.value("speed_min", 1.0);
        scene.config.speed_max = p.value("speed_max", 8.0);
        scene.config.dropout_prob = p.value("dropout_prob", 0.0);
        scene.config.seed = p.value("seed", 0u);
        scene.config.streak_clutter = p.value("streak_clutter", false);
    }
    for (const Track& t : scene.gt.tracks) {
        std::set<int> frames;
        for (int id : t.point_ids) frames.insert(scene.points.points[id].t);
        if (frames.size() != t.point_ids.size())
            throw SchemaError("ground-truth track repeats a frame");
    }
    return scene;
}

}  // namespace trackswept
