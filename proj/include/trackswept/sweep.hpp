#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "trackswept/geometry.hpp"

namespace trackswept {

// Dual-space machinery: every input point spawns two parallel dual lines
// (duals of the point translated down and up by eps). The region between the
// pair is the point's strip; a dual point inside the strip corresponds to a
// primal line passing within eps of the point. The arrangement of all 2N
// offset lines is traversed cell by cell, maintaining which strips contain
// the current cell, and locally maximal cells are reported as consensus sets.

enum class OffsetKind : uint8_t { Lower, Upper };

struct OffsetLine {
    int source_id = 0;      // index of the originating point
    OffsetKind kind = OffsetKind::Lower;
    Line2 line;             // dual of (a, b -/+ eps)
    int frame = 1;          // frame of the originating point
};

/// Offset lines for one axis projection, sorted by ascending slope, ties by
/// descending intercept then id. The sorted order is also the top-to-bottom
/// order of the initial cut.
std::vector<OffsetLine> build_offset_arrangement(const PointSet& ps, AxisPair axes, double eps);
std::vector<OffsetLine> build_offset_lines(const std::vector<Vec2>& pts,
                                           const std::vector<int>& frames, double eps);

constexpr int kNoLine = -1;  // delimiter sentinel (cut start / open end)

struct DelimPair {
    int left = kNoLine;   // partner of the line's last swept vertex
    int right = kNoLine;  // partner of the line's next unswept vertex on this tree side
};

/// State of the topological sweep. `order` is the cut sequence from top to
/// bottom; `stack_` holds cut positions whose adjacent line pair shares its
/// next (right) intersection; htu/htl are the upper/lower horizon trees kept
/// as delimiter pairs per line (right delimiter of htu is always steeper than
/// the owning line, of htl always shallower).
struct SweepState {
    std::vector<OffsetLine> lines;   // index = line id, sorted as above
    std::vector<int> order;          // cut: position -> line id
    std::vector<int> pos_of;         // line id -> position
    std::vector<int> stack_;
    std::vector<DelimPair> htu, htl;
    long long step_count = 0;

    // per-line crossing lists: partners sorted by crossing abscissa along the
    // host line, with monotone cursors realizing the horizon-tree delimiters
    std::vector<uint16_t> partners;
    std::vector<uint32_t> part_begin;  // size lines+1
    std::vector<uint32_t> cur_up, cur_dn;
    std::vector<int> cut_partner;      // kNoLine before the first step on a line

    int line_count() const { return static_cast<int>(lines.size()); }
    bool ready(int pos) const;
};

/// Consensus bookkeeping along the cut: row n describes the region between
/// cut positions n-1 and n (row 0 is above the top line). C is a bit matrix
/// region x point, C_T counts per-frame members, Z counts distinct frames
/// with nonzero count.
struct ConsensusState {
    int n_points = 0;
    int n_frames = 0;
    int words_per_row = 0;
    std::vector<uint64_t> c;
    std::vector<int32_t> ct;
    std::vector<int32_t> z;

    bool get(int row, int i) const {
        return (c[static_cast<std::size_t>(row) * words_per_row + i / 64] >> (i % 64)) & 1u;
    }
    void add_point(int row, int i, int frame);
    void remove_point(int row, int i, int frame);
    std::vector<int> row_members(int row) const;
};

struct StepEvent {
    int n = 0;  // consensus row of the crossed region
    int p = 0;  // line id above before the swap (smaller slope)
    int q = 0;  // line id below before the swap (larger slope)
};

std::pair<SweepState, ConsensusState> init_sweep(std::vector<OffsetLine> lines);

/// Pops one ready position, sweeps the vertex shared by the adjacent pair and
/// returns the event; nullopt when the stack is exhausted. Throws CorruptState
/// if the popped pair no longer shares its right endpoint.
std::optional<StepEvent> elementary_step(SweepState& st);

void update_consensus(ConsensusState& cs, const std::vector<OffsetLine>& lines,
                      const StepEvent& ev);

/// A consensus subset witnessed by one arrangement cell.
struct LinearStructure {
    std::vector<int> point_ids;  // sorted
    Line2 witness_line;          // primal line interior to the reporting cell
    double max_residual = 0.0;
    int distinct_frames = 0;
};

using SweepObserver =
    std::function<void(const SweepState&, const ConsensusState&, const StepEvent&)>;

std::vector<LinearStructure> topo_sweep(const PointSet& ps, AxisPair axes, double eps,
                                        int min_frames);
std::vector<LinearStructure> topo_sweep_observed(const PointSet& ps, AxisPair axes, double eps,
                                                 int min_frames, const SweepObserver& obs);

/// Event-queue variant that visits vertices in ascending abscissa order.
/// Identical output contract to topo_sweep; exists as a result-equivalence
/// and runtime baseline.
std::vector<LinearStructure> plane_sweep(const PointSet& ps, AxisPair axes, double eps,
                                         int min_frames);

enum class SweepKind { Topo, Plane };

/// Core entry over raw per-point projections; ids in the result index `pts`.
std::vector<LinearStructure> sweep_points(const std::vector<Vec2>& pts,
                                          const std::vector<int>& frames, double eps,
                                          int min_frames, SweepKind kind,
                                          const SweepObserver& obs = nullptr);

}  // namespace trackswept
