#ifndef PACKCLASS_STRIP_HPP
#define PACKCLASS_STRIP_HPP

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "packclass/bounds.hpp"
#include "packclass/geometry.hpp"
#include "packclass/opp.hpp"

// Strip packing driver: bisection on the column count with the OPP solver
// deciding each probe, seeded by the heuristic bounds so the loop always
// holds a concrete feasible layout for the current upper bound. On top of
// it, defragmentation re-packs a fragmented layout into the fewest columns
// and reports the before/after metrics.

namespace packclass {

class StripBudgetError : public std::runtime_error {
public:
    StripBudgetError(int lower, int upper)
        : std::runtime_error("strip probe exceeded its search budget (bounds [" +
                             std::to_string(lower) + ", " + std::to_string(upper) + "])"),
          lower_(lower), upper_(upper) {}

    int lower() const { return lower_; }
    int upper() const { return upper_; }

private:
    int lower_;
    int upper_;
};

struct StripProbe {
    int width = 0;
    OppVerdict verdict = OppVerdict::Unknown;
    SearchStats stats;
};

struct StripResult {
    int optimal_width = 0;
    Layout layout;  // witness at optimal_width
    std::vector<StripProbe> probes;
};

// Invariant: the upper end of [lb, ub] is always feasible with a witness in
// hand, everything below lb is infeasible (or lb is the volume bound), so
// lb == ub certifies optimality.
inline StripResult min_strip_width(const std::vector<ModuleSpec>& modules, int height,
                                   SolveLimits limits = {}) {
    StripResult res;
    if (modules.empty()) {
        res.optimal_width = 0;
        res.layout = Layout{{1, height < 1 ? 1 : height}, {}, {}};
        return res;
    }

    const Bounds bounds = compute_bounds(modules, height);
    int lb = bounds.lower;
    int ub = bounds.upper;
    res.layout = bounds.upper_layout;

    while (lb < ub) {
        const int w = (lb + ub) / 2;
        OppResult probe = solve_opp(modules, {w, height}, limits);
        res.probes.push_back({w, probe.verdict, probe.stats});
        switch (probe.verdict) {
            case OppVerdict::Feasible:
                ub = w;
                res.layout = std::move(*probe.layout);
                break;
            case OppVerdict::Infeasible:
                lb = w + 1;
                break;
            case OppVerdict::Unknown:
                throw StripBudgetError(lb, ub);
        }
    }
    res.optimal_width = ub;
    res.layout.container.width = std::max(ub, 1);
    return res;
}

// Gravity compaction: slide every module as far left, then as far down, as
// the others allow, repeating to a fixpoint. Width never grows, so an
// optimal-width layout stays optimal; scattered slack coalesces toward the
// high-column, high-row corner where it merges with the free column block.
inline Layout compact_layout(const Layout& layout) {
    Layout out = layout;
    std::sort(out.placements.begin(), out.placements.end(),
              [](const Placement& a, const Placement& b) {
                  if (a.x != b.x) return a.x < b.x;
                  if (a.y != b.y) return a.y < b.y;
                  return a.module_id < b.module_id;
              });

    auto collides = [&](std::size_t self, int x, int y) {
        const ModuleSpec& m = *out.find_module(out.placements[self].module_id);
        if (x < 0 || y < 0 || x + m.width > out.container.width ||
            y + m.height > out.container.height)
            return true;
        for (std::size_t i = 0; i < out.placements.size(); ++i) {
            if (i == self) continue;
            const Placement& p = out.placements[i];
            const ModuleSpec& q = *out.find_module(p.module_id);
            if (detail::interval_overlap(p.x, q.width, x, m.width) > 0 &&
                detail::interval_overlap(p.y, q.height, y, m.height) > 0)
                return true;
        }
        return false;
    };

    bool moved = true;
    while (moved) {
        moved = false;
        for (std::size_t i = 0; i < out.placements.size(); ++i) {
            Placement& p = out.placements[i];
            while (!collides(i, p.x - 1, p.y)) {
                --p.x;
                moved = true;
            }
            while (!collides(i, p.x, p.y - 1)) {
                --p.y;
                moved = true;
            }
        }
    }

    // canonical order over the final coordinates, so compaction is idempotent
    std::sort(out.placements.begin(), out.placements.end(),
              [](const Placement& a, const Placement& b) {
                  if (a.x != b.x) return a.x < b.x;
                  if (a.y != b.y) return a.y < b.y;
                  return a.module_id < b.module_id;
              });
    return out;
}

namespace detail {

// Backtracking placement that keeps the corner rectangle
// [W - hole_w, W) x [0, hole_h) empty; nullopt when the cap runs out or no
// such packing exists. Fills the first empty cell in scan order at each
// step (every packing normalizes to corner-at-cell placements), with the
// unfillable cells bounded by the slack. Deterministic.
inline std::optional<Layout> pack_with_corner_hole(const std::vector<ModuleSpec>& modules,
                                                   Container box, int hole_w, int hole_h,
                                                   long long& node_budget) {
    const int W = box.width;
    const int H = box.height;
    long long used = static_cast<long long>(hole_w) * hole_h;
    for (const auto& m : modules) used += m.area();
    if (used > box.area()) return std::nullopt;
    long long waste_left = box.area() - used;

    std::vector<char> grid(static_cast<std::size_t>(W) * H, 0);
    for (int y = 0; y < hole_h; ++y)
        for (int x = W - hole_w; x < W; ++x) grid[static_cast<std::size_t>(y) * W + x] = 1;

    const int n = static_cast<int>(modules.size());
    std::vector<char> placed_flag(static_cast<std::size_t>(n), 0);
    std::vector<Placement> placed;

    auto fits = [&](const ModuleSpec& m, int x, int y) {
        if (x + m.width > W || y + m.height > H) return false;
        for (int yy = y; yy < y + m.height; ++yy)
            for (int xx = x; xx < x + m.width; ++xx)
                if (grid[static_cast<std::size_t>(yy) * W + xx]) return false;
        return true;
    };
    auto paint = [&](const ModuleSpec& m, int x, int y, char v) {
        for (int yy = y; yy < y + m.height; ++yy)
            for (int xx = x; xx < x + m.width; ++xx)
                grid[static_cast<std::size_t>(yy) * W + xx] = v;
    };

    auto rec = [&](auto&& self, int scan_from, int remaining) -> bool {
        if (--node_budget <= 0) return false;
        if (remaining == 0) return true;
        int cell = scan_from;
        const int total = W * H;
        while (cell < total && grid[cell]) ++cell;
        if (cell == total) return false;  // modules left but no space
        const int cx = cell % W;
        const int cy = cell / W;

        // a module covering the first empty cell has its corner exactly here
        for (int i = 0; i < n; ++i) {
            if (placed_flag[i]) continue;
            bool duplicate = false;  // identical twins are interchangeable
            for (int j = 0; j < i && !duplicate; ++j)
                duplicate = !placed_flag[j] && modules[j].width == modules[i].width &&
                            modules[j].height == modules[i].height;
            if (duplicate) continue;
            const ModuleSpec& m = modules[i];
            if (!fits(m, cx, cy)) continue;
            paint(m, cx, cy, 1);
            placed_flag[i] = 1;
            placed.push_back({m.id, cx, cy});
            if (self(self, cell + 1, remaining - 1)) return true;
            placed.pop_back();
            placed_flag[i] = 0;
            paint(m, cx, cy, 0);
        }

        if (waste_left > 0) {  // or the cell stays empty
            --waste_left;
            grid[cell] = 1;
            if (self(self, cell + 1, remaining)) return true;
            grid[cell] = 0;
            ++waste_left;
        }
        return false;
    };
    if (!rec(rec, 0, n)) return std::nullopt;

    Layout out;
    out.container = box;
    out.placements = std::move(placed);
    for (const auto& m : modules) out.modules[m.id] = m;
    return out;
}

}  // namespace detail

struct DefragResult {
    Layout layout;
    MetricsReport before;
    MetricsReport after;
    StripResult strip;
};

// Re-packs the placed modules of a valid layout into columns [0, W*) where
// W* is the exact minimum; columns [W*, W) end up entirely free. The module
// multiset is preserved, only coordinates change. Contiguous free space is
// the other goal of defragmentation, so a bounded second pass looks for an
// optimal-width packing whose slack forms a corner hole flush with the free
// column block, growing the maximal free rectangle.
inline DefragResult defragment(const Layout& layout, SolveLimits limits = {}) {
    require_valid(layout, "defragment");

    DefragResult res;
    res.before = compute_metrics(layout);

    std::vector<ModuleSpec> placed;
    for (const auto& id : placed_ids_sorted(layout)) placed.push_back(*layout.find_module(id));

    res.strip = min_strip_width(placed, layout.container.height, limits);
    if (res.strip.optimal_width > layout.container.width)
        throw std::logic_error("defragment: repack wider than the original container");

    auto rehome = [&](const Layout& witness, bool compact) {
        Layout l;
        l.container = layout.container;
        l.placements = witness.placements;
        for (const auto& m : placed) l.modules[m.id] = m;
        return compact ? compact_layout(l) : l;
    };

    res.layout = rehome(res.strip.layout, true);
    res.after = compute_metrics(res.layout);

    const int W = layout.container.width;
    const int H = layout.container.height;
    const int ws = res.strip.optimal_width;
    long long occupied = 0;
    for (const auto& m : placed) occupied += m.area();
    const long long slack = static_cast<long long>(ws) * H - occupied;

    struct Hole {
        long long combined;
        int w;
        int h;
    };
    std::vector<Hole> holes;
    for (int hw = 1; hw < ws; ++hw)
        for (int hh = 1; hh < H; ++hh) {
            const long long combined = static_cast<long long>(hw + W - ws) * hh;
            if (static_cast<long long>(hw) * hh <= slack &&
                combined > res.after.max_free_rect.area())
                holes.push_back({combined, hw, hh});
        }
    std::sort(holes.begin(), holes.end(), [](const Hole& a, const Hole& b) {
        if (a.combined != b.combined) return a.combined > b.combined;
        if (a.w != b.w) return a.w < b.w;
        return a.h < b.h;
    });

    long long total_budget = 1'200'000;
    for (const auto& hole : holes) {
        if (total_budget <= 0) break;
        long long candidate_budget = std::min(total_budget, 200'000ll);
        total_budget -= candidate_budget;
        const auto packed =
            detail::pack_with_corner_hole(placed, {ws, H}, hole.w, hole.h, candidate_budget);
        total_budget += std::max(candidate_budget, 0ll);  // hand back what is left
        if (!packed) continue;
        Layout homed = rehome(*packed, false);
        MetricsReport metrics = compute_metrics(homed);
        if (metrics.max_free_rect.area() > res.after.max_free_rect.area()) {
            res.layout = std::move(homed);
            res.after = std::move(metrics);
        }
        break;  // holes are sorted best-first, nothing better remains
    }
    return res;
}

}  // namespace packclass

#endif  // PACKCLASS_STRIP_HPP
