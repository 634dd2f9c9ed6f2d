#pragma once

#include <map>
#include <string>
#include <vector>

#include "trackswept/detect.hpp"
#include "trackswept/geometry.hpp"
#include "trackswept/scene.hpp"

namespace trackswept {

struct MatchConfig {
    double lambda = 3.0;  // pixels
};

/// 1 iff the two points are within lambda (Euclidean).
int point_match(Vec2 a, Vec2 b, const MatchConfig& cfg);

/// 1 iff some point of the track matches d.
int track_match(Vec2 d, const std::vector<Vec2>& track_points, const MatchConfig& cfg);

struct CountSet {
    long long tp = 0;
    long long fn_ = 0;
    long long fp = 0;
};

struct LevelMetrics {
    CountSet counts;
    double recall = 0.0;
    double precision = 0.0;
    double f1 = 0.0;
    bool zero_gt = false;    // recall denominator was zero
    bool zero_pred = false;  // precision denominator was zero
};

struct MetricsReport {
    LevelMetrics track_level;  // tau superscript
    LevelMetrics point_level;  // d superscript
    double lambda = 3.0;
    double runtime_seconds = 0.0;
};

/// Rates from raw counts; zero denominators yield 0 with the flag set.
LevelMetrics rates_from_counts(CountSet counts);
MetricsReport report_from_counts(CountSet tau, CountSet d, double lambda);

/// Track-level and point-level TP/FN/FP plus recall/precision/F1. Matching is
/// many-to-many exactly as the counting formulas state.
MetricsReport score(const TrackSet& gt, const TrackSet& pred, const PointSet& points,
                    const MatchConfig& cfg);

// --- runtime benchmarking ----------------------------------------------------

// Scaling scenes keep the sequence length (and with it the track length) and
// the linear clutter density bounded: the per-frame clutter budget grows with
// n while the field of view grows linearly from `width` x `height` at
// size_anchor points, so spurious cross-frame alignments stay rare the way
// they are in real preprocessed sequences. Set points_per_frame > 0 to grow
// the frame count with n instead, or size_anchor = 0 to pin the image size.
struct BenchSceneTemplate {
    int frames = 10;            // used when points_per_frame == 0
    int points_per_frame = 0;   // when > 0: frames = n / points_per_frame
    int targets = 2;
    double jitter_sigma = 0.5;
    double speed_min = 1.0;
    double speed_max = 8.0;
    double width = 2048.0;
    double height = 2048.0;
    double size_anchor = 200.0;
    double eps1 = 2.0;
    double eps2 = 2.0;
};

struct BenchCell {
    std::string method;
    int n = 0;
    double median_seconds = 0.0;
    bool missing = false;  // timeout or guard refusal
};

struct BenchTable {
    std::vector<BenchCell> cells;
    std::map<std::string, double> slopes;  // log-log slope per method
};

std::string method_name(Method m);
Method method_from_name(const std::string& name);

/// For each size, generates a scene with ~N total points and records the
/// median wall time of the detection call per method. Timing excludes scene
/// generation and I/O; cells run sequentially.
BenchTable bench_scaling(const std::vector<int>& sizes, const BenchSceneTemplate& tmpl,
                         const std::vector<Method>& methods, int repeats, unsigned seed,
                         double timeout_seconds = 300.0);

std::string bench_table_csv(const BenchTable& table);
BenchTable parse_bench_csv(const std::string& text);

}  // namespace trackswept
