#include "trackswept/detect.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <map>
#include <numeric>
#include <random>
#include <set>

namespace trackswept {

namespace {

// Minimax fit for one axis projection; a vertical stack degenerates to the
// ordinate-midline of any slope, reported with slope zero.
std::pair<Line2, double> fit_axis(const std::vector<Vec2>& pts) {
    if (pts.size() < 2) return {Line2{0.0, pts.empty() ? 0.0 : pts[0].y}, 0.0};
    bool same = true;
    for (const Vec2& p : pts)
        if (p.x != pts[0].x) {
            same = false;
            break;
        }
    if (same) {
        double lo = pts[0].y, hi = pts[0].y;
        for (const Vec2& p : pts) {
            lo = std::min(lo, p.y);
            hi = std::max(hi, p.y);
        }
        return {Line2{0.0, (lo + hi) / 2.0}, (hi - lo) / 2.0};
    }
    FitResult f = chebyshev_fit(pts);
    return {f.line, f.max_abs_residual};
}

std::vector<TimedPoint> points_of(const PointSet& ps, const std::vector<int>& ids) {
    std::vector<TimedPoint> out;
    out.reserve(ids.size());
    for (int id : ids) out.push_back(ps.points[id]);
    return out;
}

// Expand a structure into one-point-per-frame candidates. Same-frame
// multiplicity means near-duplicate detections; every combination is emitted
// so any C1-respecting subset stays covered. Beyond the cap only the points
// closest to the witness line in (t,x) are kept.
void c1_expand(const PointSet& ps, const std::vector<int>& ids, Line2 witness_tx, int cap,
               std::vector<std::vector<int>>& out) {
    std::map<int, std::vector<int>> by_frame;
    for (int id : ids) by_frame[ps.points[id].t].push_back(id);

    long long combos = 1;
    bool overflow = false;
    for (auto& [t, group] : by_frame) {
        combos *= static_cast<long long>(group.size());
        if (combos > cap) {
            overflow = true;
            break;
        }
    }
    if (overflow) {
        std::vector<int> greedy;
        for (auto& [t, group] : by_frame) {
            int best = group[0];
            double bestr =
                std::abs(signed_residual(project(ps.points[best], AxisPair::TX), witness_tx));
            for (int id : group) {
                double r =
                    std::abs(signed_residual(project(ps.points[id], AxisPair::TX), witness_tx));
                if (r < bestr) {
                    best = id;
                    bestr = r;
                }
            }
            greedy.push_back(best);
        }
        out.push_back(std::move(greedy));
        return;
    }

    std::vector<int> current;
    std::vector<const std::vector<int>*> groups;
    for (auto& [t, group] : by_frame) groups.push_back(&group);
    auto rec = [&](auto&& self, std::size_t gi) -> void {
        if (gi == groups.size()) {
            out.push_back(current);
            return;
        }
        for (int id : *groups[gi]) {
            current.push_back(id);
            self(self, gi + 1);
            current.pop_back();
        }
    };
    rec(rec, 0);
}

std::vector<std::vector<int>> tier1_structures(const PointSet& ps, const DetectorConfig& cfg) {
    std::vector<std::vector<int>> out;
    switch (cfg.method) {
        case Method::TS:
        case Method::PS: {
            const SweepKind kind = cfg.method == Method::TS ? SweepKind::Topo : SweepKind::Plane;
            std::vector<int> frames;
            for (const TimedPoint& p : ps.points) frames.push_back(p.t);
            auto structures =
                sweep_points(project(ps, AxisPair::XY), frames, cfg.eps1, cfg.min_frames, kind);
            for (auto& s : structures) out.push_back(std::move(s.point_ids));
            break;
        }
        case Method::RANSAC:
            out = ransac_lines(project(ps, AxisPair::XY), cfg.ransac.inlier_eps,
                               cfg.ransac.iterations, cfg.ransac.min_inliers, cfg.ransac.seed);
            break;
        case Method::HOUGH:
            out = hough_lines(project(ps, AxisPair::XY), cfg.hough.rho_bins, cfg.hough.theta_bins,
                              cfg.hough.peak_count, cfg.hough.inlier_eps);
            break;
        case Method::NAIVE:
            throw std::invalid_argument("tier1_structures does not handle the naive method");
    }
    return out;
}

// Tier-2 candidates for one structure: one-point-per-frame id sets, frame
// gated but not yet fitted. Verification and fitting happen once per unique
// candidate; piles from overlapping tier-1 structures collapse heavily.
std::vector<std::vector<int>> refine_structure(const PointSet& ps, const DetectorConfig& cfg,
                                               const std::vector<int>& structure) {
    std::vector<std::vector<int>> candidates;
    if (structure.size() <= 2) return candidates;

    // a frame-gated structure of exactly three points is its own only
    // candidate; the second sweep would just re-derive it
    if (structure.size() == 3 && cfg.min_frames == 3) {
        candidates.push_back(structure);
        return candidates;
    }

    std::vector<Vec2> tx;
    std::vector<int> frames;
    for (int id : structure) {
        tx.push_back(project(ps.points[id], AxisPair::TX));
        frames.push_back(ps.points[id].t);
    }
    const SweepKind kind = cfg.method == Method::PS ? SweepKind::Plane : SweepKind::Topo;
    auto subs = sweep_points(tx, frames, cfg.eps2, cfg.min_frames, kind);
    for (const LinearStructure& sub : subs) {
        std::vector<int> global;
        for (int local : sub.point_ids) global.push_back(structure[local]);
        std::vector<std::vector<int>> combos;
        c1_expand(ps, global, sub.witness_line, cfg.max_c1_combos, combos);
        for (std::vector<int>& combo : combos)
            if (static_cast<int>(combo.size()) >= cfg.min_frames)
                candidates.push_back(std::move(combo));
    }
    return candidates;
}

void validate(const PointSet& ps, const DetectorConfig& cfg) {
    if (ps.empty()) throw EmptyInput("detector requires a nonempty point set");
    if (!(cfg.eps1 > 0.0) || !(cfg.eps2 > 0.0))
        throw std::invalid_argument("eps1 and eps2 must be positive");
    if (cfg.min_frames < 3) throw std::invalid_argument("min_frames must be at least 3");
}

void sort_canonical(TrackSet& ts) {
    std::sort(ts.tracks.begin(), ts.tracks.end(),
              [](const Track& a, const Track& b) { return a.point_ids < b.point_ids; });
}

}  // namespace

Track make_track(const PointSet& ps, std::vector<int> ids) {
    std::sort(ids.begin(), ids.end(), [&](int a, int b) {
        if (ps.points[a].t != ps.points[b].t) return ps.points[a].t < ps.points[b].t;
        return a < b;
    });
    std::vector<Vec2> xy, tx;
    for (int id : ids) {
        xy.push_back(project(ps.points[id], AxisPair::XY));
        tx.push_back(project(ps.points[id], AxisPair::TX));
    }
    Track tr;
    tr.point_ids = std::move(ids);
    std::tie(tr.line_xy, tr.residual_xy) = fit_axis(xy);
    std::tie(tr.line_tx, tr.residual_tx) = fit_axis(tx);
    return tr;
}

TrackSet find_all_tracks(const PointSet& ps, const DetectorConfig& cfg) {
    validate(ps, cfg);
    if (cfg.method == Method::NAIVE) return naive_enumerate(ps, cfg.eps1, cfg.eps2);

    TrackSet ts;
    ts.eps1 = cfg.eps1;
    ts.eps2 = cfg.eps2;
    ts.min_frames = cfg.min_frames;

    const std::vector<std::vector<int>> structures = tier1_structures(ps, cfg);
    std::vector<std::vector<std::vector<int>>> per_structure(structures.size());

    const int threads = std::max(1, cfg.threads);
    if (threads == 1 || structures.size() < 2) {
        for (std::size_t i = 0; i < structures.size(); ++i)
            per_structure[i] = refine_structure(ps, cfg, structures[i]);
    } else {
        std::vector<std::future<void>> jobs;
        std::atomic<std::size_t> next{0};
        for (int w = 0; w < threads; ++w)
            jobs.push_back(std::async(std::launch::async, [&]() {
                for (std::size_t i = next.fetch_add(1); i < structures.size();
                     i = next.fetch_add(1))
                    per_structure[i] = refine_structure(ps, cfg, structures[i]);
            }));
        for (auto& j : jobs) j.get();
    }

    std::set<std::vector<int>> seen;
    std::vector<std::vector<int>> unique;
    for (auto& candidates : per_structure)
        for (std::vector<int>& ids : candidates) {
            std::vector<int> key = ids;
            std::sort(key.begin(), key.end());
            if (seen.insert(std::move(key)).second) unique.push_back(std::move(ids));
        }

    // fit and verify once per unique candidate; a candidate passes exactly
    // when both minimax residuals sit inside the thresholds (frames are
    // distinct by construction)
    std::vector<Track> fitted(unique.size());
    std::vector<char> keep(unique.size(), 0);
    auto fit_range = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            Track t = make_track(ps, unique[i]);
            if (t.residual_xy <= cfg.eps1 && t.residual_tx <= cfg.eps2) {
                fitted[i] = std::move(t);
                keep[i] = 1;
            }
        }
    };
    if (threads == 1 || unique.size() < 64) {
        fit_range(0, unique.size());
    } else {
        std::vector<std::future<void>> jobs;
        const std::size_t chunk = (unique.size() + threads - 1) / threads;
        for (int w = 0; w < threads; ++w) {
            const std::size_t lo = w * chunk;
            const std::size_t hi = std::min(unique.size(), lo + chunk);
            if (lo < hi) jobs.push_back(std::async(std::launch::async, fit_range, lo, hi));
        }
        for (auto& j : jobs) j.get();
    }
    for (std::size_t i = 0; i < unique.size(); ++i)
        if (keep[i]) ts.tracks.push_back(std::move(fitted[i]));
    sort_canonical(ts);
    return ts;
}

TrackSet find_all_tracks_with_vertical(const PointSet& ps, const DetectorConfig& cfg) {
    TrackSet merged = find_all_tracks(ps, cfg);

    PointSet swapped = ps;
    for (TimedPoint& p : swapped.points) std::swap(p.x, p.y);
    TrackSet vertical = find_all_tracks(swapped, cfg);

    std::set<std::vector<int>> seen;
    for (const Track& t : merged.tracks) {
        std::vector<int> key = t.point_ids;
        std::sort(key.begin(), key.end());
        seen.insert(std::move(key));
    }
    for (Track& t : vertical.tracks) {
        std::vector<int> key = t.point_ids;
        std::sort(key.begin(), key.end());
        if (seen.insert(std::move(key)).second) {
            t.axis_swapped = true;
            merged.tracks.push_back(std::move(t));
        }
    }
    sort_canonical(merged);
    return merged;
}

TrackSet naive_enumerate(const PointSet& ps, double eps1, double eps2) {
    TrackSet ts;
    ts.eps1 = eps1;
    ts.eps2 = eps2;
    if (ps.empty()) return ts;

    std::map<int, std::vector<int>> by_frame;
    for (const TimedPoint& p : ps.points) by_frame[p.t].push_back(p.id);

    double estimate = 1.0;
    for (auto& [t, group] : by_frame) estimate *= static_cast<double>(group.size()) + 1.0;
    if (estimate > 1e7) throw TooLarge("naive enumeration would visit more than 10^7 subsets");

    std::vector<const std::vector<int>*> groups;
    for (auto& [t, group] : by_frame) groups.push_back(&group);

    std::vector<TimedPoint> current;
    // feasibility is monotone, so an infeasible partial subset prunes the
    // whole extension branch
    auto rec = [&](auto&& self, std::size_t gi) -> void {
        if (gi == groups.size()) {
            if (current.size() >= 3) {
                std::vector<int> ids;
                for (const TimedPoint& p : current) ids.push_back(p.id);
                ts.tracks.push_back(make_track(ps, std::move(ids)));
            }
            return;
        }
        self(self, gi + 1);  // skip this frame
        for (int id : *groups[gi]) {
            current.push_back(ps.points[id]);
            if (is_feasible(current, eps1, eps2).feasible()) self(self, gi + 1);
            current.pop_back();
        }
    };
    rec(rec, 0);

    sort_canonical(ts);
    return ts;
}

TrackSet baseline_detect(const PointSet& ps, const DetectorConfig& cfg) {
    if (cfg.method != Method::RANSAC && cfg.method != Method::HOUGH)
        throw std::invalid_argument("baseline_detect expects the RANSAC or HOUGH method");
    return find_all_tracks(ps, cfg);
}

std::vector<std::vector<int>> ransac_lines(const std::vector<Vec2>& pts, double inlier_eps,
                                           int iterations, int min_inliers, unsigned seed) {
    if (iterations < 1) throw std::invalid_argument("ransac needs at least one iteration");
    std::vector<std::vector<int>> out;
    std::mt19937 rng(seed);
    std::vector<int> remaining(pts.size());
    std::iota(remaining.begin(), remaining.end(), 0);

    while (static_cast<int>(remaining.size()) >= std::max(2, min_inliers)) {
        std::vector<int> best;
        for (int it = 0; it < iterations; ++it) {
            const int m = static_cast<int>(remaining.size());
            int a = std::uniform_int_distribution<int>(0, m - 1)(rng);
            int b = std::uniform_int_distribution<int>(0, m - 2)(rng);
            if (b >= a) ++b;
            const Vec2 pa = pts[remaining[a]];
            const Vec2 pb = pts[remaining[b]];
            if (pa.x == pb.x) continue;
            const double slope = (pb.y - pa.y) / (pb.x - pa.x);
            const Line2 model{slope, pa.y - slope * pa.x};
            std::vector<int> inliers;
            for (int id : remaining)
                if (std::abs(signed_residual(pts[id], model)) <= inlier_eps) inliers.push_back(id);
            if (inliers.size() > best.size()) best = std::move(inliers);
        }
        if (static_cast<int>(best.size()) < min_inliers) break;
        out.push_back(best);
        std::set<int> taken(best.begin(), best.end());
        std::vector<int> next;
        for (int id : remaining)
            if (!taken.count(id)) next.push_back(id);
        remaining = std::move(next);
    }
    return out;
}

std::vector<std::vector<int>> hough_lines(const std::vector<Vec2>& pts, int rho_bins,
                                          int theta_bins, int peak_count, double inlier_eps) {
    if (rho_bins < 2 || theta_bins < 2) throw std::invalid_argument("hough needs >= 2 bins");
    std::vector<std::vector<int>> out;
    if (pts.empty() || peak_count < 1) return out;

    double radius = 1.0;
    for (const Vec2& p : pts) radius = std::max(radius, std::hypot(p.x, p.y));
    radius += 1.0;
    const double rho_width = 2.0 * radius / rho_bins;

    std::vector<double> cos_t(theta_bins), sin_t(theta_bins);
    for (int k = 0; k < theta_bins; ++k) {
        const double theta = M_PI * (k + 0.5) / theta_bins;
        cos_t[k] = std::cos(theta);
        sin_t[k] = std::sin(theta);
    }

    std::vector<int> acc(static_cast<std::size_t>(rho_bins) * theta_bins, 0);
    auto at = [&](int r, int t) -> int& {
        return acc[static_cast<std::size_t>(r) * theta_bins + t];
    };
    for (const Vec2& p : pts)
        for (int k = 0; k < theta_bins; ++k) {
            const double rho = p.x * cos_t[k] + p.y * sin_t[k];
            int r = static_cast<int>(std::floor((rho + radius) / rho_width));
            r = std::clamp(r, 0, rho_bins - 1);
            ++at(r, k);
        }

    struct Peak {
        int count, r, t;
    };
    std::vector<Peak> peaks;
    for (int r = 0; r < rho_bins; ++r)
        for (int t = 0; t < theta_bins; ++t) {
            const int v = at(r, t);
            if (v == 0) continue;
            bool is_max = true;
            for (int dr = -1; dr <= 1 && is_max; ++dr)
                for (int dt = -1; dt <= 1 && is_max; ++dt) {
                    if (dr == 0 && dt == 0) continue;
                    const int rr = r + dr, tt = t + dt;
                    if (rr < 0 || rr >= rho_bins || tt < 0 || tt >= theta_bins) continue;
                    if (at(rr, tt) > v) is_max = false;
                }
            if (is_max) peaks.push_back({v, r, t});
        }
    std::sort(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) {
        if (a.count != b.count) return a.count > b.count;
        if (a.r != b.r) return a.r < b.r;
        return a.t < b.t;
    });

    for (const Peak& pk : peaks) {
        if (static_cast<int>(out.size()) >= peak_count) break;
        const double rho_c = -radius + (pk.r + 0.5) * rho_width;
        std::vector<int> ids;
        for (int i = 0; i < static_cast<int>(pts.size()); ++i)
            if (std::abs(pts[i].x * cos_t[pk.t] + pts[i].y * sin_t[pk.t] - rho_c) <= inlier_eps)
                ids.push_back(i);
        if (!ids.empty()) out.push_back(std::move(ids));
    }
    return out;
}

TrackSet select_tracks(const TrackSet& ts, const Selection& sel) {
    TrackSet out;
    out.eps1 = ts.eps1;
    out.eps2 = ts.eps2;
    out.min_frames = ts.min_frames;
    if (sel.kind == Selection::Kind::All) {
        out.tracks = ts.tracks;
        return out;
    }

    std::vector<const Track*> ordered;
    for (const Track& t : ts.tracks) ordered.push_back(&t);
    auto quality = [&](const Track& t) {
        return std::max(t.residual_xy / ts.eps1, t.residual_tx / ts.eps2);
    };
    std::sort(ordered.begin(), ordered.end(), [&](const Track* a, const Track* b) {
        if (a->length() != b->length()) return a->length() > b->length();
        const double qa = quality(*a), qb = quality(*b);
        if (qa != qb) return qa < qb;
        return a->point_ids < b->point_ids;
    });

    auto contained_in_selected = [&](const Track& t) {
        for (const Track& s : out.tracks) {
            if (s.length() <= t.length()) continue;
            std::set<int> sid(s.point_ids.begin(), s.point_ids.end());
            bool sub = true;
            for (int id : t.point_ids)
                if (!sid.count(id)) {
                    sub = false;
                    break;
                }
            if (sub) return true;
        }
        return false;
    };

    for (const Track* t : ordered) {
        if (sel.kind == Selection::Kind::TopK &&
            static_cast<int>(out.tracks.size()) >= std::max(1, sel.k))
            break;
        if (sel.kind == Selection::Kind::Threshold && t->length() <= sel.tr) continue;
        if (contained_in_selected(*t)) continue;
        out.tracks.push_back(*t);
    }
    return out;
}

}  // namespace trackswept
