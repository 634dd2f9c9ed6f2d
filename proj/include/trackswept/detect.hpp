#pragma once

#include <vector>

#include "trackswept/geometry.hpp"
#include "trackswept/sweep.hpp"

namespace trackswept {

/// A feasible track: point ids ordered by frame plus both line fits.
/// When axis_swapped is set the track came from the vertical-detection pass
/// and the fits live in the swapped coordinate frame ((y,x) and (t,y)).
struct Track {
    std::vector<int> point_ids;
    Line2 line_xy;
    Line2 line_tx;
    double residual_xy = 0.0;
    double residual_tx = 0.0;
    bool axis_swapped = false;

    int length() const { return static_cast<int>(point_ids.size()); }
};

struct TrackSet {
    std::vector<Track> tracks;
    double eps1 = 2.0;
    double eps2 = 2.0;
    int min_frames = 3;
};

enum class Method { TS, PS, RANSAC, HOUGH, NAIVE };

struct Selection {
    enum class Kind { TopK, Threshold, All } kind = Kind::All;
    int k = 4;   // TopK
    int tr = 3;  // Threshold: keep tracks with length > tr
};

struct RansacParams {
    int iterations = 1000;
    double inlier_eps = 2.0;
    int min_inliers = 3;
    unsigned seed = 0;
};

struct HoughParams {
    int rho_bins = 128;
    int theta_bins = 128;
    int peak_count = 8;
    double inlier_eps = 2.0;
};

struct DetectorConfig {
    double eps1 = 2.0;
    double eps2 = 2.0;
    int min_frames = 3;
    Method method = Method::TS;
    Selection selection;
    RansacParams ransac;
    HoughParams hough;
    int threads = 1;          // tier-2 fan-out; results independent of the value
    int max_c1_combos = 1024; // per-frame expansion cap before greedy fallback
};

/// Two-tiered solver: structures within eps1 of a line in (x,y), refined by a
/// second sweep in (t,x) at eps2, every candidate verified feasible.
TrackSet find_all_tracks(const PointSet& ps, const DetectorConfig& cfg);

/// Runs find_all_tracks on the input and on the x/y-swapped copy to catch
/// near-vertical tracks; merged with deduplication on point ids.
TrackSet find_all_tracks_with_vertical(const PointSet& ps, const DetectorConfig& cfg);

/// Exhaustive ground-truth oracle: enumerates every subset respecting C1 with
/// more than two points and keeps the feasible ones. Refuses inputs whose
/// subset count estimate exceeds 10^7.
TrackSet naive_enumerate(const PointSet& ps, double eps1, double eps2);

/// Line-finder baseline: RANSAC or Hough structures, then the second-tier
/// refinement. Mirrors the two-step baseline pipeline.
TrackSet baseline_detect(const PointSet& ps, const DetectorConfig& cfg);

/// Sequential 2-point-sample RANSAC; found inliers are removed and the search
/// repeats until no model reaches min_inliers. Deterministic under seed.
std::vector<std::vector<int>> ransac_lines(const std::vector<Vec2>& pts, double inlier_eps,
                                           int iterations, int min_inliers, unsigned seed);

/// rho-theta accumulator; top peaks after non-maximum suppression, inlier
/// sets gathered at inlier_eps (perpendicular distance).
std::vector<std::vector<int>> hough_lines(const std::vector<Vec2>& pts, int rho_bins,
                                          int theta_bins, int peak_count, double inlier_eps);

/// TopK / Threshold track selection with deterministic tie-breaking; tracks
/// strictly contained in an already selected longer track are dropped.
TrackSet select_tracks(const TrackSet& ts, const Selection& sel);

/// Orders ids by frame and attaches both minimax fits (a vertical stack gets
/// the slope-zero midline).
Track make_track(const PointSet& ps, std::vector<int> ids);

}  // namespace trackswept
