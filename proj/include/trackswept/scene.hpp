#pragma once

#include <filesystem>

#include "trackswept/detect.hpp"
#include "trackswept/geometry.hpp"

namespace trackswept {

/// Deterministic synthetic-scene parameters: constant-velocity targets with
/// Gaussian detection jitter plus per-frame clutter.
struct SceneConfig {
    int frames = 5;
    double width = 2048.0;
    double height = 2048.0;
    int targets = 4;
    int clutter_per_frame = 0;
    double jitter_sigma = 0.0;
    double speed_min = 1.0;  // px per frame
    double speed_max = 8.0;
    double dropout_prob = 0.0;  // missed-detection probability per frame
    unsigned seed = 0;
    bool streak_clutter = false;  // clutter along short segments instead of uniform
};

struct GeneratedScene {
    PointSet points;
    TrackSet gt;
    SceneConfig config;
};

/// Each target gets a random in-bounds start and constant velocity; per frame
/// its jittered position is emitted unless dropped. Targets keep at least
/// three surviving detections and a feasible fit or are regenerated (at most
/// 100 attempts, then InfeasibleConfig). Deterministic under seed.
GeneratedScene generate_scene(const SceneConfig& cfg);

/// points.csv + gt.json under dir; lossless round-trip.
void write_scene(const std::filesystem::path& dir, const GeneratedScene& scene);
GeneratedScene read_scene(const std::filesystem::path& dir);

}  // namespace trackswept
