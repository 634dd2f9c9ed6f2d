#include "trackswept/sweep.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>

namespace trackswept {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double cross_x(const Line2& a, const Line2& b) { return (b.c - a.c) / (a.m - b.m); }

// --- exact comparison of crossing abscissas -----------------------------------
//
// Crossing positions are rationals over the (exact) double line coefficients.
// Nearly concurrent vertices differ by less than the rounding error of the
// quotient, and inconsistent rounded orderings corrupt both sweeps. A cheap
// double filter decides the easy cases; near ties fall through to an exact
// sign computation built from error-free transformations.

inline void two_sum(double a, double b, double& s, double& err) {
    s = a + b;
    const double bv = s - a;
    const double av = s - bv;
    err = (a - av) + (b - bv);
}

inline void two_diff(double a, double b, double& s, double& err) {
    s = a - b;
    const double bv = a - s;
    const double av = s + bv;
    err = (a - av) + (bv - b);
}

inline void two_prod(double a, double b, double& p, double& err) {
    p = a * b;
    err = std::fma(a, b, -p);
}

// Exact sign of the sum of the terms, by two_sum distillation: each pass
// preserves the total while shrinking the error mass until the head term
// provably dominates.
int exact_sign(double* t, int n) {
    double head = 0.0;
    for (int pass = 0; pass < 200; ++pass) {
        double s = head;
        for (int i = 0; i < n; ++i) {
            double e;
            two_sum(s, t[i], s, e);
            t[i] = e;
        }
        head = s;
        double mag = 0.0;
        for (int i = 0; i < n; ++i) mag += std::abs(t[i]);
        if (mag == 0.0) return head == 0.0 ? 0 : (head > 0.0 ? 1 : -1);
        if (std::abs(head) > 2.0 * mag) return head > 0.0 ? 1 : -1;
    }
    throw CorruptState("exact sign distillation failed to converge");
}

// sign of (n1/d1 - n2/d2) with n1 = cu - ch etc., all quantities exact
// 2-expansions of double differences
int compare_quotients_exact(double cu, double ch_for_u, double mh_u, double mu, double cw,
                            double ch_for_w, double mh_w, double mw) {
    double n1h, n1l, d1h, d1l, n2h, n2l, d2h, d2l;
    two_diff(cu, ch_for_u, n1h, n1l);
    two_diff(mh_u, mu, d1h, d1l);
    two_diff(cw, ch_for_w, n2h, n2l);
    two_diff(mh_w, mw, d2h, d2l);

    double t[16];
    int k = 0;
    auto emit = [&](double a, double b, double sgn) {
        double p, e;
        two_prod(a, b, p, e);
        t[k++] = sgn * p;
        t[k++] = sgn * e;
    };
    emit(n1h, d2h, +1.0);
    emit(n1h, d2l, +1.0);
    emit(n1l, d2h, +1.0);
    emit(n1l, d2l, +1.0);
    emit(n2h, d1h, -1.0);
    emit(n2h, d1l, -1.0);
    emit(n2l, d1h, -1.0);
    emit(n2l, d1l, -1.0);
    const int s = exact_sign(t, 16);
    const int sd1 = d1h > 0.0 ? 1 : -1;  // exact: a-b is zero only when a == b
    const int sd2 = d2h > 0.0 ? 1 : -1;
    return s * sd1 * sd2;
}

// Deterministic symbolic perturbation: conceptually every intercept c_i is
// replaced by c_i + g_i with infinitesimals g_0 >> g_1 >> ... > 0. All order
// decisions (crossing order along a line, global vertex order) are taken in
// the perturbed arrangement, which is simple, so concurrent or coincident
// lines in real pixel data cannot corrupt the sweep.
struct PerturbCmp {
    const std::vector<OffsetLine>& lines;

    double m(int i) const { return lines[i].line.m; }
    double c(int i) const { return lines[i].line.c; }

    // -1 / 0 / +1 for x(a1 x b1) vs x(a2 x b2), exact in the unperturbed input.
    // The rounded quotients carry at most a few ulps of relative error, so a
    // 1e-13 relative margin decides all but genuinely near-tied crossings.
    int cross_compare(int a1, int b1, int a2, int b2) const {
        const double x1 = cross_x(lines[a1].line, lines[b1].line);
        const double x2 = cross_x(lines[a2].line, lines[b2].line);
        if (std::isfinite(x1) && std::isfinite(x2)) {
            const double margin = 1e-13 * (std::abs(x1) + std::abs(x2)) + 1e-300;
            if (x1 < x2 - margin) return -1;
            if (x2 < x1 - margin) return 1;
        }
        return compare_quotients_exact(c(b1), c(a1), m(a1), m(b1), c(b2), c(a2), m(a2), m(b2));
    }

    // crossing (h,u) strictly before (h,w) along host h
    bool before_on(int h, int u, int w) const {
        const int cmp = cross_compare(h, u, h, w);
        if (cmp != 0) return cmp < 0;
        const double du = m(h) - m(u);
        const double dw = m(h) - m(w);
        int ids[3] = {u, w, h};
        std::sort(ids, ids + 3);
        for (int s : ids) {
            double coef = 0.0;
            if (s == u) coef += 1.0 / du;
            if (s == w) coef -= 1.0 / dw;
            if (s == h) coef += 1.0 / dw - 1.0 / du;
            if (coef != 0.0) return coef < 0.0;
        }
        return u < w;
    }

    // vertex (a,b) strictly before vertex (c,d) in the global sweep order
    bool vertex_before(int a, int b, int c, int d) const {
        const int cmp = cross_compare(a, b, c, d);
        if (cmp != 0) return cmp < 0;
        const double dab = m(a) - m(b);
        const double dcd = m(c) - m(d);
        int ids[4] = {a, b, c, d};
        std::sort(ids, ids + 4);
        int prev = -1;
        for (int s : ids) {
            if (s == prev) continue;
            prev = s;
            double coef = 0.0;
            if (s == b) coef += 1.0 / dab;
            if (s == a) coef -= 1.0 / dab;
            if (s == d) coef -= 1.0 / dcd;
            if (s == c) coef += 1.0 / dcd;
            if (coef != 0.0) return coef < 0.0;
        }
        return std::minmax(a, b) < std::minmax(c, d);
    }
};

bool after_cut(const SweepState& st, const PerturbCmp& cmp, int host, int j) {
    const int cut = st.cut_partner[host];
    if (cut == kNoLine) return true;
    if (j == cut) return false;
    return cmp.before_on(host, cut, j);
}

void advance_up(SweepState& st, const PerturbCmp& cmp, int h) {
    const uint32_t e = st.part_begin[h + 1];
    uint32_t& cur = st.cur_up[h];
    const double mh = st.lines[h].line.m;
    while (cur < e) {
        const int j = st.partners[cur];
        if (st.lines[j].line.m > mh && after_cut(st, cmp, h, j)) break;
        ++cur;
    }
    st.htu[h].right = (cur < e) ? st.partners[cur] : kNoLine;
}

void advance_dn(SweepState& st, const PerturbCmp& cmp, int h) {
    const uint32_t e = st.part_begin[h + 1];
    uint32_t& cur = st.cur_dn[h];
    const double mh = st.lines[h].line.m;
    while (cur < e) {
        const int j = st.partners[cur];
        if (st.lines[j].line.m < mh && after_cut(st, cmp, h, j)) break;
        ++cur;
    }
    st.htl[h].right = (cur < e) ? st.partners[cur] : kNoLine;
}

void build_partner_lists(SweepState& st) {
    const int n_lines = st.line_count();
    if (n_lines > 65534) throw TooLarge("sweep limited to 65534 offset lines");
    const PerturbCmp cmp{st.lines};

    st.part_begin.assign(static_cast<std::size_t>(n_lines) + 1, 0);
    st.partners.clear();
    st.partners.reserve(static_cast<std::size_t>(n_lines) * (n_lines > 0 ? n_lines - 1 : 0));

    // sort partners by their precomputed crossing abscissa; only near ties pay
    // for the exact/symbolic comparison
    std::vector<std::pair<double, uint16_t>> scratch;
    scratch.reserve(n_lines);
    for (int h = 0; h < n_lines; ++h) {
        st.part_begin[h] = static_cast<uint32_t>(st.partners.size());
        scratch.clear();
        const Line2 lh = st.lines[h].line;
        for (int j = 0; j < n_lines; ++j) {
            if (j == h || st.lines[j].line.m == lh.m) continue;
            scratch.push_back({cross_x(lh, st.lines[j].line), static_cast<uint16_t>(j)});
        }
        std::sort(scratch.begin(), scratch.end(),
                  [&](const std::pair<double, uint16_t>& a, const std::pair<double, uint16_t>& b) {
                      const double margin =
                          1e-13 * (std::abs(a.first) + std::abs(b.first)) + 1e-300;
                      if (std::isfinite(a.first) && std::isfinite(b.first)) {
                          if (a.first < b.first - margin) return true;
                          if (b.first < a.first - margin) return false;
                      }
                      return cmp.before_on(h, a.second, b.second);
                  });
        for (const auto& [key, id] : scratch) st.partners.push_back(id);
    }
    st.part_begin[n_lines] = static_cast<uint32_t>(st.partners.size());
}

ConsensusState init_consensus(const std::vector<OffsetLine>& lines) {
    ConsensusState cs;
    const int n_lines = static_cast<int>(lines.size());
    int n_points = 0, n_frames = 1;
    for (const OffsetLine& l : lines) {
        n_points = std::max(n_points, l.source_id + 1);
        n_frames = std::max(n_frames, l.frame);
    }
    cs.n_points = n_points;
    cs.n_frames = n_frames;
    cs.words_per_row = (n_points + 63) / 64;
    const int rows = n_lines + 1;
    cs.c.assign(static_cast<std::size_t>(rows) * cs.words_per_row, 0);
    cs.ct.assign(static_cast<std::size_t>(rows) * n_frames, 0);
    cs.z.assign(rows, 0);

    // walk the initial cut top to bottom; crossing an Upper line enters its
    // strip, crossing a Lower line leaves it (Upper sorts first per strip)
    for (int pos = 0; pos < n_lines; ++pos) {
        const int row = pos + 1;
        std::copy_n(cs.c.begin() + static_cast<std::size_t>(pos) * cs.words_per_row,
                    cs.words_per_row, cs.c.begin() + static_cast<std::size_t>(row) * cs.words_per_row);
        std::copy_n(cs.ct.begin() + static_cast<std::size_t>(pos) * n_frames, n_frames,
                    cs.ct.begin() + static_cast<std::size_t>(row) * n_frames);
        cs.z[row] = cs.z[pos];
        const OffsetLine& l = lines[pos];
        if (l.kind == OffsetKind::Upper)
            cs.add_point(row, l.source_id, l.frame);
        else
            cs.remove_point(row, l.source_id, l.frame);
    }
    return cs;
}

}  // namespace

void ConsensusState::add_point(int row, int i, int frame) {
    c[static_cast<std::size_t>(row) * words_per_row + i / 64] |= 1ull << (i % 64);
    if (ct[static_cast<std::size_t>(row) * n_frames + frame - 1]++ == 0) ++z[row];
}

void ConsensusState::remove_point(int row, int i, int frame) {
    c[static_cast<std::size_t>(row) * words_per_row + i / 64] &= ~(1ull << (i % 64));
    if (--ct[static_cast<std::size_t>(row) * n_frames + frame - 1] == 0) --z[row];
}

std::vector<int> ConsensusState::row_members(int row) const {
    std::vector<int> ids;
    const uint64_t* w = &c[static_cast<std::size_t>(row) * words_per_row];
    for (int wi = 0; wi < words_per_row; ++wi) {
        uint64_t word = w[wi];
        while (word) {
            ids.push_back(wi * 64 + std::countr_zero(word));
            word &= word - 1;
        }
    }
    return ids;
}

std::vector<OffsetLine> build_offset_lines(const std::vector<Vec2>& pts,
                                           const std::vector<int>& frames, double eps) {
    if (pts.empty()) throw EmptyInput("cannot build an arrangement from zero points");
    if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
    std::vector<OffsetLine> lines;
    lines.reserve(pts.size() * 2);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        lines.push_back({static_cast<int>(i), OffsetKind::Lower,
                         point_to_dual_line({pts[i].x, pts[i].y - eps}), frames[i]});
        lines.push_back({static_cast<int>(i), OffsetKind::Upper,
                         point_to_dual_line({pts[i].x, pts[i].y + eps}), frames[i]});
    }
    std::sort(lines.begin(), lines.end(), [](const OffsetLine& a, const OffsetLine& b) {
        if (a.line.m != b.line.m) return a.line.m < b.line.m;
        if (a.line.c != b.line.c) return a.line.c > b.line.c;
        if (a.source_id != b.source_id) return a.source_id < b.source_id;
        return a.kind == OffsetKind::Upper && b.kind == OffsetKind::Lower;
    });
    return lines;
}

std::vector<OffsetLine> build_offset_arrangement(const PointSet& ps, AxisPair axes, double eps) {
    std::vector<int> frames;
    frames.reserve(ps.points.size());
    for (const TimedPoint& p : ps.points) frames.push_back(p.t);
    return build_offset_lines(project(ps, axes), frames, eps);
}

bool SweepState::ready(int pos) const {
    const int s = order[pos];
    const int t = order[pos + 1];
    return htu[s].right == t && htl[t].right == s;
}

std::pair<SweepState, ConsensusState> init_sweep(std::vector<OffsetLine> lines) {
    SweepState st;
    st.lines = std::move(lines);
    const int n_lines = st.line_count();
    st.order.resize(n_lines);
    std::iota(st.order.begin(), st.order.end(), 0);
    st.pos_of = st.order;
    st.htu.assign(n_lines, {});
    st.htl.assign(n_lines, {});
    st.cut_partner.assign(n_lines, kNoLine);

    build_partner_lists(st);
    st.cur_up.resize(n_lines);
    st.cur_dn.resize(n_lines);
    const PerturbCmp cmp{st.lines};
    for (int h = 0; h < n_lines; ++h) {
        st.cur_up[h] = st.part_begin[h];
        st.cur_dn[h] = st.part_begin[h];
        advance_up(st, cmp, h);
        advance_dn(st, cmp, h);
    }
    for (int pos = n_lines - 2; pos >= 0; --pos)
        if (st.ready(pos)) st.stack_.push_back(pos);

    ConsensusState cs = init_consensus(st.lines);
    return {std::move(st), std::move(cs)};
}

std::optional<StepEvent> elementary_step(SweepState& st) {
    if (st.stack_.empty()) return std::nullopt;
    const int pos = st.stack_.back();
    st.stack_.pop_back();
    const int s = st.order[pos];
    const int t = st.order[pos + 1];
    if (st.htu[s].right != t || st.htl[t].right != s)
        throw CorruptState("popped cut pair no longer shares its right endpoint");

    st.order[pos] = t;
    st.order[pos + 1] = s;
    st.pos_of[t] = pos;
    st.pos_of[s] = pos + 1;
    st.cut_partner[s] = t;
    st.cut_partner[t] = s;
    st.htu[s].left = t;
    st.htl[s].left = t;
    st.htu[t].left = s;
    st.htl[t].left = s;

    const PerturbCmp cmp{st.lines};
    advance_up(st, cmp, s);
    advance_dn(st, cmp, s);
    advance_up(st, cmp, t);
    advance_dn(st, cmp, t);
    ++st.step_count;

    if (pos > 0 && st.ready(pos - 1)) st.stack_.push_back(pos - 1);
    if (pos + 2 < st.line_count() && st.ready(pos + 1)) st.stack_.push_back(pos + 1);
    return StepEvent{pos + 1, s, t};
}

void update_consensus(ConsensusState& cs, const std::vector<OffsetLine>& lines,
                      const StepEvent& ev) {
    const OffsetLine& lp = lines[ev.p];
    const OffsetLine& lq = lines[ev.q];
    const bool p_lower = lp.kind == OffsetKind::Lower;
    const bool q_lower = lq.kind == OffsetKind::Lower;
    if (p_lower && !q_lower) {  // entering both strips
        cs.add_point(ev.n, lp.source_id, lp.frame);
        cs.add_point(ev.n, lq.source_id, lq.frame);
    } else if (!p_lower && q_lower) {  // leaving both strips
        cs.remove_point(ev.n, lp.source_id, lp.frame);
        cs.remove_point(ev.n, lq.source_id, lq.frame);
    } else if (p_lower && q_lower) {  // swap membership: q out, p in
        cs.remove_point(ev.n, lq.source_id, lq.frame);
        cs.add_point(ev.n, lp.source_id, lp.frame);
    } else {  // swap membership: p out, q in
        cs.remove_point(ev.n, lp.source_id, lp.frame);
        cs.add_point(ev.n, lq.source_id, lq.frame);
    }
}

namespace {

struct Reporter {
    const std::vector<Vec2>& pts;
    int min_frames;
    std::vector<LinearStructure> out;
    std::unordered_map<uint64_t, std::vector<int>> buckets;

    static uint64_t hash_ids(const std::vector<int>& ids) {
        uint64_t h = 1469598103934665603ull;
        for (int v : ids) {
            h ^= static_cast<uint64_t>(v) + 0x9e3779b97f4a7c15ull;
            h *= 1099511628211ull;
        }
        return h;
    }

    void report(const ConsensusState& cs, int row, Line2 witness) {
        std::vector<int> ids = cs.row_members(row);
        const uint64_t h = hash_ids(ids);
        auto& bucket = buckets[h];
        for (int idx : bucket)
            if (out[idx].point_ids == ids) return;
        double maxr = 0.0;
        for (int i : ids) maxr = std::max(maxr, std::abs(signed_residual(pts[i], witness)));
        bucket.push_back(static_cast<int>(out.size()));
        out.push_back({std::move(ids), witness, maxr, cs.z[row]});
    }
};

// Dual point strictly left of every vertex, for witnessing the regions the
// initial cut passes through (cells unbounded to the left).
double left_of_all_vertices(const std::vector<OffsetLine>& lines) {
    double lo = 0.0;
    bool any = false;
    for (std::size_t i = 0; i < lines.size(); ++i)
        for (std::size_t j = i + 1; j < lines.size(); ++j) {
            if (lines[i].line.m == lines[j].line.m) continue;
            const double x = cross_x(lines[i].line, lines[j].line);
            if (std::isfinite(x)) {
                lo = any ? std::min(lo, x) : x;
                any = true;
            }
        }
    return lo - 1.0;
}

// Left-unbounded cells never get entered by an elementary step, so regions of
// the initial cut that already meet the frame gate are reported up front.
void report_initial_regions(const std::vector<OffsetLine>& lines, const ConsensusState& cs,
                            int min_frames, Reporter& rep) {
    const int n_lines = static_cast<int>(lines.size());
    double p0 = 0.0;
    bool have_p0 = false;
    for (int row = 0; row <= n_lines; ++row) {
        if (cs.z[row] < min_frames) continue;
        if (!have_p0) {
            p0 = left_of_all_vertices(lines);
            have_p0 = true;
        }
        double qv;
        if (row == 0)
            qv = line_at(lines[0].line, p0) + 1.0;
        else if (row == n_lines)
            qv = line_at(lines[n_lines - 1].line, p0) - 1.0;
        else
            qv = (line_at(lines[row - 1].line, p0) + line_at(lines[row].line, p0)) / 2.0;
        rep.report(cs, row, dual_point_to_line({p0, qv}));
    }
}

double next_vertex_x(const SweepState& st, int h) {
    double x = kInf;
    const uint32_t e = st.part_begin[h + 1];
    if (st.cur_up[h] < e)
        x = std::min(x, cross_x(st.lines[h].line, st.lines[st.partners[st.cur_up[h]]].line));
    if (st.cur_dn[h] < e)
        x = std::min(x, cross_x(st.lines[h].line, st.lines[st.partners[st.cur_dn[h]]].line));
    return x;
}

Line2 step_witness(const SweepState& st, const StepEvent& ev) {
    const Line2 lp = st.lines[ev.p].line;
    const Line2 lq = st.lines[ev.q].line;
    const double xv = cross_x(lp, lq);
    double gap = std::min(next_vertex_x(st, ev.p), next_vertex_x(st, ev.q)) - xv;
    if (!std::isfinite(gap) || gap <= 0.0) gap = 2.0;
    const double pd = xv + gap / 2.0;
    const double qd = (line_at(lp, pd) + line_at(lq, pd)) / 2.0;
    return dual_point_to_line({pd, qd});
}

std::vector<LinearStructure> run_topo(const std::vector<Vec2>& pts,
                                      const std::vector<int>& frames, double eps, int min_frames,
                                      const SweepObserver& obs) {
    auto [st, cs] = init_sweep(build_offset_lines(pts, frames, eps));
    Reporter rep{pts, min_frames, {}, {}};
    report_initial_regions(st.lines, cs, min_frames, rep);
    while (auto ev = elementary_step(st)) {
        update_consensus(cs, st.lines, *ev);
        if (obs) obs(st, cs, *ev);
        if (st.lines[ev->p].kind == OffsetKind::Lower &&
            st.lines[ev->q].kind == OffsetKind::Upper && cs.z[ev->n] >= min_frames)
            rep.report(cs, ev->n, step_witness(st, *ev));
    }
    return std::move(rep.out);
}

std::vector<LinearStructure> run_plane(const std::vector<Vec2>& pts,
                                       const std::vector<int>& frames, double eps,
                                       int min_frames) {
    std::vector<OffsetLine> lines = build_offset_lines(pts, frames, eps);
    const int n_lines = static_cast<int>(lines.size());
    ConsensusState cs = init_consensus(lines);
    Reporter rep{pts, min_frames, {}, {}};
    report_initial_regions(lines, cs, min_frames, rep);

    const PerturbCmp cmp{lines};
    std::vector<std::pair<uint16_t, uint16_t>> events;
    for (int i = 0; i < n_lines; ++i)
        for (int j = i + 1; j < n_lines; ++j)
            if (lines[i].line.m != lines[j].line.m)
                events.push_back({static_cast<uint16_t>(i), static_cast<uint16_t>(j)});
    std::sort(events.begin(), events.end(), [&](const auto& a, const auto& b) {
        return cmp.vertex_before(a.first, a.second, b.first, b.second);
    });

    std::vector<int> order(n_lines), pos_of(n_lines);
    std::iota(order.begin(), order.end(), 0);
    pos_of = order;

    auto process = [&](int a, int b) {
        const int pa = pos_of[a];
        const int pb = pos_of[b];
        const int top = std::min(pa, pb);
        const int p = order[top];
        const int q = order[top + 1];
        order[top] = q;
        order[top + 1] = p;
        pos_of[q] = top;
        pos_of[p] = top + 1;
        const StepEvent ev{top + 1, p, q};
        update_consensus(cs, lines, ev);
        if (lines[p].kind == OffsetKind::Lower && lines[q].kind == OffsetKind::Upper &&
            cs.z[ev.n] >= min_frames) {
            // interior point just right of the vertex, clear of the next
            // vertex on either bounding line
            const double xv = cross_x(lines[p].line, lines[q].line);
            double nxt = kInf;
            for (int h : {p, q})
                for (int j = 0; j < n_lines; ++j) {
                    if (j == h || lines[j].line.m == lines[h].line.m) continue;
                    const double x = cross_x(lines[h].line, lines[j].line);
                    if (x > xv) nxt = std::min(nxt, x);
                }
            const double gap = std::isfinite(nxt) ? nxt - xv : 2.0;
            const double pd = xv + gap / 2.0;
            const double qd = (line_at(lines[p].line, pd) + line_at(lines[q].line, pd)) / 2.0;
            rep.report(cs, ev.n, dual_point_to_line({pd, qd}));
        }
    };
    auto adjacent = [&](int a, int b) {
        const int pa = pos_of[a];
        const int pb = pos_of[b];
        return pa == pb + 1 || pb == pa + 1;
    };

    // Floating x keys of nearly concurrent vertices can disagree with the
    // true order along the lines; an event whose pair is not yet adjacent is
    // deferred until the blocking vertices are processed.
    std::vector<std::pair<uint16_t, uint16_t>> deferred;
    for (const auto& [a, b] : events) {
        if (!adjacent(a, b)) {
            deferred.push_back({a, b});
            continue;
        }
        process(a, b);
        bool progressed = true;
        while (progressed && !deferred.empty()) {
            progressed = false;
            for (std::size_t i = 0; i < deferred.size(); ++i)
                if (adjacent(deferred[i].first, deferred[i].second)) {
                    process(deferred[i].first, deferred[i].second);
                    deferred.erase(deferred.begin() + static_cast<long>(i));
                    progressed = true;
                    break;
                }
        }
    }
    if (!deferred.empty())
        throw CorruptState("plane sweep stalled on events whose pairs never became adjacent");
    return std::move(rep.out);
}

void check_sweep_args(const std::vector<Vec2>& pts, double eps, int min_frames) {
    if (pts.empty()) throw EmptyInput("sweep requires a nonempty point set");
    if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
    if (min_frames < 3) throw std::invalid_argument("min_frames must be at least 3");
}

}  // namespace

std::vector<LinearStructure> sweep_points(const std::vector<Vec2>& pts,
                                          const std::vector<int>& frames, double eps,
                                          int min_frames, SweepKind kind,
                                          const SweepObserver& obs) {
    check_sweep_args(pts, eps, min_frames);
    if (kind == SweepKind::Topo) return run_topo(pts, frames, eps, min_frames, obs);
    return run_plane(pts, frames, eps, min_frames);
}

std::vector<LinearStructure> topo_sweep(const PointSet& ps, AxisPair axes, double eps,
                                        int min_frames) {
    return topo_sweep_observed(ps, axes, eps, min_frames, nullptr);
}

std::vector<LinearStructure> topo_sweep_observed(const PointSet& ps, AxisPair axes, double eps,
                                                 int min_frames, const SweepObserver& obs) {
    if (ps.empty()) throw EmptyInput("sweep requires a nonempty point set");
    std::vector<int> frames;
    frames.reserve(ps.points.size());
    for (const TimedPoint& p : ps.points) frames.push_back(p.t);
    return sweep_points(project(ps, axes), frames, eps, min_frames, SweepKind::Topo, obs);
}

std::vector<LinearStructure> plane_sweep(const PointSet& ps, AxisPair axes, double eps,
                                         int min_frames) {
    if (ps.empty()) throw EmptyInput("sweep requires a nonempty point set");
    std::vector<int> frames;
    frames.reserve(ps.points.size());
    for (const TimedPoint& p : ps.points) frames.push_back(p.t);
    return sweep_points(project(ps, axes), frames, eps, min_frames, SweepKind::Plane);
}

}  // namespace trackswept
