#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "trackswept/errors.hpp"

namespace trackswept {

/// One detection: frame index plus pixel coordinates.
struct TimedPoint {
    int id = 0;  // dense 0..N-1 within a PointSet
    double x = 0.0;
    double y = 0.0;
    int t = 1;  // frame index, 1..F
};

struct PointSet {
    std::vector<TimedPoint> points;
    int frame_count = 0;

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
};

/// Builds a PointSet from raw detections: exact duplicates in (x, y, t) are
/// dropped (first occurrence wins) and ids are reassigned densely.
/// `dropped` (optional) receives the number of discarded duplicates.
PointSet make_point_set(std::vector<TimedPoint> raw, int* dropped = nullptr);

/// Slope/intercept line q = m*p + c. Vertical lines are unrepresentable;
/// near-vertical data goes through the axis-swapped pass instead.
struct Line2 {
    double m = 0.0;
    double c = 0.0;
};

/// A 2D point in whichever plane is in play (primal, dual, (t,x), ...).
struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

/// The two coordinate pairs the detector works in. XY carries eps1 semantics,
/// TX carries eps2 semantics.
enum class AxisPair { XY, TX };

/// Projects a point onto the chosen axis pair: (x,y) or (t,x).
inline Vec2 project(const TimedPoint& p, AxisPair axes) {
    return axes == AxisPair::XY ? Vec2{p.x, p.y} : Vec2{static_cast<double>(p.t), p.x};
}

std::vector<Vec2> project(const PointSet& ps, AxisPair axes);

// --- point/line duality -----------------------------------------------------
//
// A point d = (x, y) maps to the dual line q = x*p + y; a line y = m*x + c
// maps to the dual point (-m, c). Both maps are involutions and preserve
// vertical distances with flipped above/below sides.

inline Line2 point_to_dual_line(Vec2 d) { return Line2{d.x, d.y}; }
inline Vec2 line_to_dual_point(Line2 l) { return Vec2{-l.m, l.c}; }
inline Vec2 dual_line_to_point(Line2 dual) { return Vec2{dual.m, dual.c}; }
inline Line2 dual_point_to_line(Vec2 delta) { return Line2{-delta.x, delta.y}; }

/// Intersection of two lines; nullopt when slopes are equal.
std::optional<Vec2> intersect_lines(Line2 a, Line2 b);

/// Vertical signed residual of a point against a line: ordinate - (m*absc + c).
inline double signed_residual(Vec2 d, Line2 l) { return d.y - (l.m * d.x + l.c); }

inline double line_at(Line2 l, double p) { return l.m * p + l.c; }

// --- Chebyshev (minimax) line fit -------------------------------------------

struct FitResult {
    Line2 line;
    double max_abs_residual = 0.0;
    std::vector<int> support;  // up to 3 indices into the fitted points
};

/// Minimax line fit: minimizes the maximum vertical residual. Solved through
/// the 3-point support characterization (the optimal line equioscillates on
/// at most three points). Throws DegenerateAbscissa when every abscissa is
/// equal. Requires at least two points.
FitResult chebyshev_fit(std::span<const Vec2> pts);

// --- track feasibility --------------------------------------------------------

struct FeasibilityVerdict {
    bool c1 = true;  // all frame indices distinct
    bool c2 = true;  // minimax residual in (x,y) within eps1
    bool c3 = true;  // minimax residual in (t,x) within eps2
    bool feasible() const { return c1 && c2 && c3; }
};

/// Checks the three track-feasibility conditions. Tracks of length <= 1 are
/// vacuously feasible. When all points of a condition share one abscissa the
/// minimax residual degenerates to half the ordinate spread.
FeasibilityVerdict is_feasible(std::span<const TimedPoint> track, double eps1, double eps2);

}  // namespace trackswept
