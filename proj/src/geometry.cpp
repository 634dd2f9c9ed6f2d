#include "trackswept/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <unordered_set>

namespace trackswept {

namespace {

struct XytHash {
    std::size_t operator()(const TimedPoint& p) const {
        std::size_t h = std::hash<double>()(p.x);
        h ^= std::hash<double>()(p.y) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        h ^= std::hash<int>()(p.t) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }
};

struct XytEq {
    bool operator()(const TimedPoint& a, const TimedPoint& b) const {
        return a.x == b.x && a.y == b.y && a.t == b.t;
    }
};

}  // namespace

PointSet make_point_set(std::vector<TimedPoint> raw, int* dropped) {
    PointSet ps;
    std::unordered_set<TimedPoint, XytHash, XytEq> seen;
    seen.reserve(raw.size());
    int n_dropped = 0;
    for (const TimedPoint& p : raw) {
        if (p.t < 1 || !std::isfinite(p.x) || !std::isfinite(p.y))
            throw SchemaError("invalid point: frame must be >= 1 and coordinates finite");
        if (!seen.insert(p).second) {
            ++n_dropped;
            continue;
        }
        TimedPoint q = p;
        q.id = static_cast<int>(ps.points.size());
        ps.points.push_back(q);
        ps.frame_count = std::max(ps.frame_count, q.t);
    }
    if (dropped) *dropped = n_dropped;
    return ps;
}

std::vector<Vec2> project(const PointSet& ps, AxisPair axes) {
    std::vector<Vec2> out;
    out.reserve(ps.points.size());
    for (const TimedPoint& p : ps.points) out.push_back(project(p, axes));
    return out;
}

std::optional<Vec2> intersect_lines(Line2 a, Line2 b) {
    if (a.m == b.m) return std::nullopt;
    const double p = (b.c - a.c) / (a.m - b.m);
    return Vec2{p, a.m * p + a.c};
}

namespace {

double max_abs_residual(std::span<const Vec2> pts, Line2 l) {
    double r = 0.0;
    for (const Vec2& p : pts) r = std::max(r, std::abs(signed_residual(p, l)));
    return r;
}

// Equioscillating line of a 3-point support: the chord through the two
// abscissa-extreme points, offset by half the middle point's deviation.
// Returns nullopt when the triple spans no abscissa range.
std::optional<std::pair<Line2, double>> triple_line(Vec2 a, Vec2 b, Vec2 c) {
    std::array<Vec2, 3> s{a, b, c};
    std::sort(s.begin(), s.end(), [](const Vec2& u, const Vec2& v) { return u.x < v.x; });
    if (s[0].x == s[2].x) return std::nullopt;
    const double m = (s[2].y - s[0].y) / (s[2].x - s[0].x);
    const double c0 = s[0].y - m * s[0].x;
    const double dev = s[1].y - (m * s[1].x + c0);
    return std::make_pair(Line2{m, c0 + dev / 2.0}, std::abs(dev) / 2.0);
}

}  // namespace

FitResult chebyshev_fit(std::span<const Vec2> pts) {
    const int n = static_cast<int>(pts.size());
    if (n < 2) throw EmptyInput("chebyshev_fit needs at least two points");

    bool same_abscissa = true;
    for (int i = 1; i < n; ++i)
        if (pts[i].x != pts[0].x) {
            same_abscissa = false;
            break;
        }
    if (same_abscissa) throw DegenerateAbscissa("all abscissas equal; use the swapped axis pass");

    FitResult out;
    if (n == 2) {
        out.line.m = (pts[1].y - pts[0].y) / (pts[1].x - pts[0].x);
        out.line.c = pts[0].y - out.line.m * pts[0].x;
        out.max_abs_residual = max_abs_residual(pts, out.line);
        out.support = {0, 1};
        return out;
    }

    // The minimax value equals the largest per-triple optimum; the winning
    // triple's equioscillating line is the global fit.
    double best_r = -1.0;
    Line2 best_line;
    std::array<int, 3> best_sup{0, 0, 0};
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k) {
                auto t = triple_line(pts[i], pts[j], pts[k]);
                if (!t) continue;
                if (t->second > best_r) {
                    best_r = t->second;
                    best_line = t->first;
                    best_sup = {i, j, k};
                }
            }

    if (best_r < 0.0) {
        // Every triple degenerate yet not all abscissas equal cannot happen
        // with n >= 3; fall back to the extreme-abscissa chord regardless.
        auto [lo, hi] = std::minmax_element(
            pts.begin(), pts.end(), [](const Vec2& u, const Vec2& v) { return u.x < v.x; });
        const int i = static_cast<int>(lo - pts.begin());
        const int k = static_cast<int>(hi - pts.begin());
        best_line.m = (pts[k].y - pts[i].y) / (pts[k].x - pts[i].x);
        best_line.c = pts[i].y - best_line.m * pts[i].x;
        best_r = 0.0;
        best_sup = {i, k, k};
    }

    double achieved = max_abs_residual(pts, best_line);
    const double scale = std::max(1.0, best_r);
    if (achieved > best_r + 1e-9 * scale) {
        // Tied degenerate supports: fall back to an exhaustive scan over every
        // triple's line, judged by its whole-set max residual.
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                for (int k = j + 1; k < n; ++k) {
                    auto t = triple_line(pts[i], pts[j], pts[k]);
                    if (!t) continue;
                    const double r = max_abs_residual(pts, t->first);
                    if (r < achieved) {
                        achieved = r;
                        best_line = t->first;
                        best_sup = {i, j, k};
                    }
                }
    }

    out.line = best_line;
    out.max_abs_residual = achieved;
    out.support.assign(best_sup.begin(), best_sup.end());
    out.support.erase(std::unique(out.support.begin(), out.support.end()), out.support.end());
    return out;
}

namespace {

// C2/C3 check for one axis pair: minimax residual against eps, with the
// all-same-abscissa case handled by the half-spread rule (a line of any slope
// through the stacked abscissa realizes it).
bool axis_condition(std::span<const Vec2> pts, double eps) {
    if (pts.size() <= 1) return true;
    bool same = true;
    for (std::size_t i = 1; i < pts.size(); ++i)
        if (pts[i].x != pts[0].x) {
            same = false;
            break;
        }
    if (same) {
        double lo = pts[0].y, hi = pts[0].y;
        for (const Vec2& p : pts) {
            lo = std::min(lo, p.y);
            hi = std::max(hi, p.y);
        }
        return (hi - lo) / 2.0 <= eps;
    }
    return chebyshev_fit(pts).max_abs_residual <= eps;
}

}  // namespace

FeasibilityVerdict is_feasible(std::span<const TimedPoint> track, double eps1, double eps2) {
    FeasibilityVerdict v;
    if (track.size() <= 1) return v;

    std::unordered_set<int> frames;
    for (const TimedPoint& p : track)
        if (!frames.insert(p.t).second) v.c1 = false;

    std::vector<Vec2> xy, tx;
    xy.reserve(track.size());
    tx.reserve(track.size());
    for (const TimedPoint& p : track) {
        xy.push_back(project(p, AxisPair::XY));
        tx.push_back(project(p, AxisPair::TX));
    }
    v.c2 = axis_condition(xy, eps1);
    v.c3 = axis_condition(tx, eps2);
    return v;
}

}  // namespace trackswept
