#ifndef PACKCLASS_HARNESS_HPP
#define PACKCLASS_HARNESS_HPP

#include <algorithm>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "packclass/geometry.hpp"
#include "packclass/rng.hpp"
#include "packclass/strip.hpp"

// Scenario simulator for online placement with idle-time defragmentation:
// least-interference-fit arrivals, LRU eviction, usage-count based removal,
// and per-defragment metric rows.

namespace packclass {

struct ScenarioEvent {
    enum class Type { Arrive, Depart, RemoveLowUsage, Defragment };

    Type type = Type::Defragment;
    ModuleSpec module;      // Arrive
    std::string module_id;  // Depart
    int threshold = 0;      // RemoveLowUsage

    static ScenarioEvent arrive(ModuleSpec m) {
        ScenarioEvent e;
        e.type = Type::Arrive;
        e.module = std::move(m);
        return e;
    }
    static ScenarioEvent depart(std::string id) {
        ScenarioEvent e;
        e.type = Type::Depart;
        e.module_id = std::move(id);
        return e;
    }
    static ScenarioEvent remove_low_usage(int threshold) {
        ScenarioEvent e;
        e.type = Type::RemoveLowUsage;
        e.threshold = threshold;
        return e;
    }
    static ScenarioEvent defragment() { return ScenarioEvent{}; }

    friend bool operator==(const ScenarioEvent&, const ScenarioEvent&) = default;
};

// Least interference fit: among all feasible positions, minimize the number
// of distinct placed modules sharing columns with the newcomer, then the
// total shared column count, then x, then y. Rejection (no fit) is a normal
// outcome.
inline std::optional<Placement> lif_place(const Layout& layout, const ModuleSpec& module) {
    const int W = layout.container.width;
    const int H = layout.container.height;
    if (module.width < 1 || module.height < 1)
        throw std::invalid_argument("lif_place: non-positive module extent");
    if (module.width > W || module.height > H) return std::nullopt;

    // prefix sums over the occupancy grid for O(1) emptiness tests
    const auto grid = detail::occupancy_grid(layout);
    std::vector<int> pref(static_cast<std::size_t>(W + 1) * (H + 1), 0);
    for (int y = 0; y < H; ++y)
        for (int x = 0; x < W; ++x)
            pref[(y + 1ull) * (W + 1) + (x + 1)] =
                pref[(y + 0ull) * (W + 1) + (x + 1)] + pref[(y + 1ull) * (W + 1) + x] -
                pref[(y + 0ull) * (W + 1) + x] + grid[static_cast<std::size_t>(y) * W + x];
    auto occupied_cells = [&](int x0, int y0, int x1, int y1) {  // half-open
        return pref[static_cast<std::size_t>(y1) * (W + 1) + x1] -
               pref[static_cast<std::size_t>(y0) * (W + 1) + x1] -
               pref[static_cast<std::size_t>(y1) * (W + 1) + x0] +
               pref[static_cast<std::size_t>(y0) * (W + 1) + x0];
    };

    struct Candidate {
        int modules_hit;
        long long columns_hit;
        int x;
        int y;
    };
    std::optional<Candidate> best;

    for (int x = 0; x + module.width <= W; ++x) {
        int hit = 0;
        long long cols = 0;
        for (const auto& p : layout.placements) {
            const ModuleSpec& m = *layout.find_module(p.module_id);
            const int ov = detail::interval_overlap(p.x, m.width, x, module.width);
            if (ov > 0) {
                ++hit;
                cols += ov;
            }
        }
        if (best && (hit > best->modules_hit ||
                     (hit == best->modules_hit && cols > best->columns_hit)))
            continue;  // even the best y cannot beat the incumbent
        for (int y = 0; y + module.height <= H; ++y) {
            if (occupied_cells(x, y, x + module.width, y + module.height) != 0) continue;
            Candidate cand{hit, cols, x, y};
            if (!best || cand.modules_hit < best->modules_hit ||
                (cand.modules_hit == best->modules_hit &&
                 (cand.columns_hit < best->columns_hit ||
                  (cand.columns_hit == best->columns_hit &&
                   (cand.x < best->x || (cand.x == best->x && cand.y < best->y))))))
                best = cand;
            break;  // smaller y wins every tie at this x
        }
    }

    if (!best) return std::nullopt;
    return Placement{module.id, best->x, best->y};
}

// Placed module with the oldest last-use timestamp; ties fall to the
// lexicographically smallest id.
inline std::string lru_evict(const Layout& layout,
                             const std::map<std::string, long long>& last_use) {
    if (layout.placements.empty()) throw std::invalid_argument("lru_evict: empty layout");
    std::string best_id;
    long long best_t = std::numeric_limits<long long>::max();
    std::vector<std::string> ids = placed_ids_sorted(layout);
    for (const auto& id : ids) {
        const auto it = last_use.find(id);
        if (it == last_use.end())
            throw std::invalid_argument("lru_evict: no timestamp for module '" + id + "'");
        if (it->second < best_t) {
            best_t = it->second;
            best_id = id;
        }
    }
    return best_id;
}

struct RemovalResult {
    Layout layout;
    std::vector<std::string> removed;  // ascending ids
};

inline RemovalResult remove_low_usage(const Layout& layout, int threshold) {
    RemovalResult res;
    res.layout.container = layout.container;
    res.layout.modules = layout.modules;
    for (const auto& p : layout.placements) {
        const ModuleSpec* m = layout.find_module(p.module_id);
        if (m && m->usage_count < threshold) {
            res.removed.push_back(p.module_id);
            res.layout.modules.erase(p.module_id);
        } else {
            res.layout.placements.push_back(p);
        }
    }
    std::sort(res.removed.begin(), res.removed.end());
    return res;
}

class ScenarioError : public std::runtime_error {
public:
    ScenarioError(int event_index, const std::string& what)
        : std::runtime_error("event " + std::to_string(event_index) + ": " + what),
          event_index_(event_index) {}

    int event_index() const { return event_index_; }

private:
    int event_index_;
};

struct DefragRow {
    int event_index = 0;
    int placed_count = 0;      // |I| at defragmentation time
    long long free_space = 0;  // RFUs
    FreeRect before_rect;
    int before_free_columns = 0;
    FreeRect after_rect;
    int after_free_columns = 0;
    int optimal_width = 0;
};

struct Rejection {
    int event_index = 0;
    std::string module_id;
};

struct Snapshot {
    int event_index = 0;  // -1 for the initial layout
    std::string note;
    Layout layout;
};

struct ScenarioReport {
    std::vector<DefragRow> rows;
    std::vector<Rejection> rejections;
    std::vector<Snapshot> snapshots;
    Layout final_layout;
    MetricsReport final_metrics;
};

// Folds the events over the initial layout. Arrive uses lif_place and may
// reject; Depart of an unplaced module is malformed and reported with its
// event index.
inline ScenarioReport run_scenario(const Layout& initial,
                                   const std::vector<ScenarioEvent>& events,
                                   SolveLimits limits = {}) {
    require_valid(initial, "run_scenario");

    ScenarioReport rep;
    Layout state = initial;
    rep.snapshots.push_back({-1, "initial", state});

    for (int i = 0; i < static_cast<int>(events.size()); ++i) {
        const ScenarioEvent& e = events[i];
        std::string note;
        switch (e.type) {
            case ScenarioEvent::Type::Arrive: {
                const ModuleSpec& m = e.module;
                if (m.id.empty() || m.width < 1 || m.height < 1)
                    throw ScenarioError(i, "malformed arrive event");
                if (state.is_placed(m.id))
                    throw ScenarioError(i, "module '" + m.id + "' is already placed");
                const auto pos = lif_place(state, m);
                if (!pos) {
                    rep.rejections.push_back({i, m.id});
                    note = "arrive " + m.id + " rejected";
                } else {
                    state.modules[m.id] = m;
                    state.placements.push_back(*pos);
                    note = "arrive " + m.id;
                }
                break;
            }
            case ScenarioEvent::Type::Depart: {
                if (!state.is_placed(e.module_id))
                    throw ScenarioError(i, "depart of unplaced module '" + e.module_id + "'");
                std::erase_if(state.placements,
                              [&](const Placement& p) { return p.module_id == e.module_id; });
                state.modules.erase(e.module_id);
                note = "depart " + e.module_id;
                break;
            }
            case ScenarioEvent::Type::RemoveLowUsage: {
                auto r = remove_low_usage(state, e.threshold);
                state = std::move(r.layout);
                note = "remove_low_usage<" + std::to_string(e.threshold) + "> dropped " +
                       std::to_string(r.removed.size());
                break;
            }
            case ScenarioEvent::Type::Defragment: {
                DefragResult d = defragment(state, limits);
                DefragRow row;
                row.event_index = i;
                row.placed_count = static_cast<int>(state.placements.size());
                row.free_space = d.before.free_area;
                row.before_rect = d.before.max_free_rect;
                row.before_free_columns = d.before.free_cols.count;
                row.after_rect = d.after.max_free_rect;
                row.after_free_columns = d.after.free_cols.count;
                row.optimal_width = d.strip.optimal_width;
                rep.rows.push_back(row);
                state = std::move(d.layout);
                note = "defragment to " + std::to_string(row.optimal_width) + " columns";
                break;
            }
        }
        rep.snapshots.push_back({i, note, state});
    }

    rep.final_layout = state;
    rep.final_metrics = compute_metrics(state);
    return rep;
}

struct ScenarioParams {
    Container container{13, 11};
    int min_modules = 5;   // placed count targeted at defragmentation time
    int max_modules = 11;
    int min_width = 1;
    int max_width = 5;
    int min_height = 2;
    int max_height = 6;
    int extra_arrivals = 6;         // churn beyond the target, later departed
    int max_usage = 9;
    int low_usage_threshold = 3;    // 0 disables the RemoveLowUsage event
    // keep churning until the largest free rectangle is at most this share
    // of the free space; defragmentation scenarios start fragmented
    int max_coherence_percent = 70;
    bool end_with_defragment = true;
};

struct GeneratedScenario {
    Container container;
    std::vector<ModuleSpec> modules;  // every spec referenced by the events
    std::vector<ScenarioEvent> events;
};

// Deterministic scenario from a seed: a busy phase of LIF arrivals, a
// low-usage sweep, LRU departures down to the target population, then a
// defragmentation. Depart events reference placed modules by construction
// because generation replays the placement it emits.
inline GeneratedScenario generate_scenario(std::uint64_t seed, const ScenarioParams& params = {}) {
    if (params.container.width < 1 || params.container.height < 1 ||
        params.min_width < 1 || params.min_height < 1 ||
        params.max_width < params.min_width || params.max_height < params.min_height ||
        params.max_width > params.container.width ||
        params.max_height > params.container.height || params.min_modules < 0 ||
        params.max_modules < params.min_modules || params.extra_arrivals < 0 ||
        params.max_usage < 0)
        throw std::invalid_argument("generate_scenario: impossible parameters");

    SplitMix64 rng(seed);
    GeneratedScenario out;
    out.container = params.container;

    Layout sim{params.container, {}, {}};
    std::vector<std::string> placed_order;  // arrival order, oldest first
    int serial = 0;

    auto fresh_module = [&](int min_usage) {
        ModuleSpec m;
        m.id = "M" + std::to_string(++serial);
        m.width = rng.range(params.min_width, params.max_width);
        m.height = rng.range(params.min_height, params.max_height);
        m.usage_count = rng.range(min_usage, params.max_usage);
        return m;
    };

    auto try_arrive = [&](int min_usage) -> bool {
        ModuleSpec m = fresh_module(min_usage);
        for (int attempt = 0; attempt < 8; ++attempt) {
            if (const auto pos = lif_place(sim, m)) {
                out.modules.push_back(m);
                out.events.push_back(ScenarioEvent::arrive(m));
                sim.modules[m.id] = m;
                sim.placements.push_back(*pos);
                placed_order.push_back(m.id);
                return true;
            }
            // shrink and retry; fragmented devices reject bulky modules
            if (m.width > params.min_width) m.width = std::max(params.min_width, m.width / 2);
            else if (m.height > params.min_height)
                m.height = std::max(params.min_height, m.height / 2);
            else
                break;
        }
        return false;
    };

    // departures hit random victims, which fragments the free space the way
    // scattered task completions do on a real device
    auto depart_random = [&] {
        const std::size_t k = rng.below(placed_order.size());
        const std::string id = placed_order[k];
        placed_order.erase(placed_order.begin() + static_cast<std::ptrdiff_t>(k));
        out.events.push_back(ScenarioEvent::depart(id));
        std::erase_if(sim.placements, [&](const Placement& p) { return p.module_id == id; });
        sim.modules.erase(id);
    };

    const int target = rng.range(params.min_modules, params.max_modules);
    const int busy = target + params.extra_arrivals;
    for (int k = 0; k < busy; ++k) try_arrive(0);

    if (params.low_usage_threshold > 0) {
        out.events.push_back(ScenarioEvent::remove_low_usage(params.low_usage_threshold));
        auto r = remove_low_usage(sim, params.low_usage_threshold);
        sim = std::move(r.layout);
        for (const auto& id : r.removed)
            std::erase(placed_order, id);
    }

    while (static_cast<int>(placed_order.size()) > target) depart_random();
    int guard = 0;
    while (static_cast<int>(placed_order.size()) < target && guard++ < 64)
        try_arrive(std::min(params.low_usage_threshold, params.max_usage));

    // extra churn while the free space is still one coherent block; a device
    // that is not fragmented has nothing to defragment
    if (params.max_coherence_percent > 0) {
        for (int tries = 0; tries < 8 && !placed_order.empty(); ++tries) {
            const auto metrics = compute_metrics(sim);
            if (metrics.free_area <= 0) break;
            if (metrics.max_free_rect.area() * 100 <=
                metrics.free_area * params.max_coherence_percent)
                break;
            depart_random();
            try_arrive(std::min(params.low_usage_threshold, params.max_usage));
            while (static_cast<int>(placed_order.size()) > target) depart_random();
            guard = 0;
            while (static_cast<int>(placed_order.size()) < target && guard++ < 64)
                try_arrive(std::min(params.low_usage_threshold, params.max_usage));
        }
    }

    if (params.end_with_defragment) out.events.push_back(ScenarioEvent::defragment());
    return out;
}

}  // namespace packclass

#endif  // PACKCLASS_HARNESS_HPP
