#ifndef PACKCLASS_GEOMETRY_HPP
#define PACKCLASS_GEOMETRY_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

// Core rectangle/layout types for column-reconfigurable devices, plus the
// fragmentation metrics (free area, free columns, maximal free rectangle)
// and the column-interference cost used to judge placements.
//
// All coordinates use the half-open convention: a module of width w placed
// at column x occupies columns [x, x+w). Overlap tests are integer interval
// intersections.

namespace packclass {

// A relocatable rectangular hardware module. Width counts columns, height
// counts rows. usage_count drives low-usage eviction in the harness.
struct ModuleSpec {
    std::string id;
    int width = 1;
    int height = 1;
    int usage_count = 0;

    long long area() const { return static_cast<long long>(width) * height; }

    friend bool operator==(const ModuleSpec&, const ModuleSpec&) = default;
};

struct Container {
    int width = 1;   // W columns
    int height = 1;  // H rows

    long long area() const { return static_cast<long long>(width) * height; }

    friend bool operator==(const Container&, const Container&) = default;
};

struct Placement {
    std::string module_id;
    int x = 0;  // column index
    int y = 0;  // row index

    friend bool operator==(const Placement&, const Placement&) = default;
};

// A container plus non-overlapping axis-aligned placements. The modules map
// may hold specs that are not currently placed (e.g. between depart and
// re-arrival in a scenario); placements must reference known specs.
struct Layout {
    Container container;
    std::vector<Placement> placements;
    std::map<std::string, ModuleSpec> modules;

    const ModuleSpec* find_module(const std::string& id) const {
        auto it = modules.find(id);
        return it == modules.end() ? nullptr : &it->second;
    }

    bool is_placed(const std::string& id) const {
        for (const auto& p : placements)
            if (p.module_id == id) return true;
        return false;
    }

    friend bool operator==(const Layout&, const Layout&) = default;
};

struct Violation {
    enum class Kind { UnknownModule, BadModule, DuplicatePlacement, OutOfBounds, Overlap };
    Kind kind;
    std::string a;  // first module id involved
    std::string b;  // second id for overlaps, empty otherwise
    std::string message;
};

namespace detail {

inline int interval_overlap(int lo1, int len1, int lo2, int len2) {
    const int lo = std::max(lo1, lo2);
    const int hi = std::min(lo1 + len1, lo2 + len2);
    return std::max(0, hi - lo);
}

}  // namespace detail

// Checks every Layout invariant and reports all violations; an empty result
// means the layout is valid. Unknown module ids are reported, not thrown.
inline std::vector<Violation> validate_layout(const Layout& layout) {
    std::vector<Violation> out;
    const int W = layout.container.width;
    const int H = layout.container.height;
    if (W < 1 || H < 1)
        out.push_back({Violation::Kind::BadModule, "", "",
                       "container extents must be at least 1x1"});
    for (const auto& [id, m] : layout.modules) {
        if (m.id != id)
            out.push_back({Violation::Kind::BadModule, id, "",
                           "module map key does not match spec id '" + m.id + "'"});
        if (m.width < 1 || m.height < 1 || m.usage_count < 0)
            out.push_back({Violation::Kind::BadModule, id, "",
                           "module '" + id + "' has non-positive extent or negative usage"});
    }

    std::vector<const Placement*> checkable;
    std::map<std::string, int> seen;
    for (const auto& p : layout.placements) {
        if (++seen[p.module_id] == 2)
            out.push_back({Violation::Kind::DuplicatePlacement, p.module_id, "",
                           "module '" + p.module_id + "' placed more than once"});
        const ModuleSpec* m = layout.find_module(p.module_id);
        if (!m) {
            out.push_back({Violation::Kind::UnknownModule, p.module_id, "",
                           "placement references unknown module '" + p.module_id + "'"});
            continue;
        }
        if (p.x < 0 || p.y < 0 || p.x + m->width > W || p.y + m->height > H) {
            out.push_back({Violation::Kind::OutOfBounds, p.module_id, "",
                           "module '" + p.module_id + "' at (" + std::to_string(p.x) + "," +
                               std::to_string(p.y) + ") leaves the container"});
            continue;
        }
        checkable.push_back(&p);
    }

    for (std::size_t i = 0; i < checkable.size(); ++i) {
        const auto& a = *checkable[i];
        const ModuleSpec& ma = *layout.find_module(a.module_id);
        for (std::size_t j = i + 1; j < checkable.size(); ++j) {
            const auto& b = *checkable[j];
            const ModuleSpec& mb = *layout.find_module(b.module_id);
            if (detail::interval_overlap(a.x, ma.width, b.x, mb.width) > 0 &&
                detail::interval_overlap(a.y, ma.height, b.y, mb.height) > 0) {
                out.push_back({Violation::Kind::Overlap, a.module_id, b.module_id,
                               "modules '" + a.module_id + "' and '" + b.module_id +
                                   "' overlap"});
            }
        }
    }
    return out;
}

inline bool layout_is_valid(const Layout& layout) { return validate_layout(layout).empty(); }

inline void require_valid(const Layout& layout, const char* where) {
    auto v = validate_layout(layout);
    if (!v.empty())
        throw std::invalid_argument(std::string(where) + ": invalid layout: " + v.front().message);
}

struct FreeRect {
    int width = 0;
    int height = 0;
    int x = 0;
    int y = 0;

    long long area() const { return static_cast<long long>(width) * height; }

    friend bool operator==(const FreeRect&, const FreeRect&) = default;
};

struct FreeColumns {
    int count = 0;
    std::vector<int> columns;  // ascending

    friend bool operator==(const FreeColumns&, const FreeColumns&) = default;
};

// Free area in reconfigurable units: container area minus placed module area.
inline long long free_area(const Layout& layout) {
    long long used = 0;
    for (const auto& p : layout.placements) used += layout.find_module(p.module_id)->area();
    return layout.container.area() - used;
}

// A column c is free iff no placed module intersects [c, c+1), regardless of
// how many rows the module spans.
inline FreeColumns free_columns(const Layout& layout) {
    const int W = layout.container.width;
    std::vector<char> used(static_cast<std::size_t>(W), 0);
    for (const auto& p : layout.placements) {
        const ModuleSpec& m = *layout.find_module(p.module_id);
        for (int c = std::max(0, p.x); c < std::min(W, p.x + m.width); ++c) used[c] = 1;
    }
    FreeColumns fc;
    for (int c = 0; c < W; ++c)
        if (!used[c]) fc.columns.push_back(c);
    fc.count = static_cast<int>(fc.columns.size());
    return fc;
}

namespace detail {

inline std::vector<char> occupancy_grid(const Layout& layout) {
    const int W = layout.container.width;
    const int H = layout.container.height;
    std::vector<char> grid(static_cast<std::size_t>(W) * H, 0);
    for (const auto& p : layout.placements) {
        const ModuleSpec& m = *layout.find_module(p.module_id);
        for (int y = p.y; y < p.y + m.height; ++y)
            for (int x = p.x; x < p.x + m.width; ++x) grid[static_cast<std::size_t>(y) * W + x] = 1;
    }
    return grid;
}

}  // namespace detail

// Maximum-area axis-aligned rectangle containing no placed cell. Ties are
// broken by larger width, then smaller (x, y) lexicographically. A fully
// occupied layout yields the zero rectangle.
inline FreeRect max_free_rectangle(const Layout& layout) {
    const int W = layout.container.width;
    const int H = layout.container.height;
    const auto grid = detail::occupancy_grid(layout);

    // runs[y*W+x] = length of the free run downward from (x, y); scanning
    // top-left corners with a widening window then covers every candidate.
    std::vector<int> runs(static_cast<std::size_t>(W) * H, 0);
    for (int x = 0; x < W; ++x) {
        int run = 0;
        for (int y = H - 1; y >= 0; --y) {
            run = grid[static_cast<std::size_t>(y) * W + x] ? 0 : run + 1;
            runs[static_cast<std::size_t>(y) * W + x] = run;
        }
    }

    FreeRect best{0, 0, 0, 0};
    auto better = [](const FreeRect& a, const FreeRect& b) {
        if (a.area() != b.area()) return a.area() > b.area();
        if (a.width != b.width) return a.width > b.width;
        if (a.x != b.x) return a.x < b.x;
        return a.y < b.y;
    };
    for (int y = 0; y < H; ++y) {
        for (int x = 0; x < W; ++x) {
            int h = H;  // min free run over widening window
            for (int w = 1; x + w <= W; ++w) {
                h = std::min(h, runs[static_cast<std::size_t>(y) * W + x + w - 1]);
                if (h == 0) break;
                FreeRect cand{w, h, x, y};
                if (better(cand, best)) best = cand;
            }
        }
    }
    return best;
}

// Interruption cost of reconfiguring columns [x, x+w): each placed module j
// sharing k columns with the window is stopped for time_per_column * k.
struct InterferenceReport {
    int interrupted_modules = 0;
    std::map<std::string, long long> interruption;  // per placed module, zeros included

    long long total() const {
        long long t = 0;
        for (const auto& [id, v] : interruption) t += v;
        return t;
    }
};

inline InterferenceReport column_interference(const Layout& layout, int x, int w,
                                              int time_per_column = 1) {
    if (w < 0 || x < 0 || x + w > layout.container.width)
        throw std::invalid_argument("column_interference: window outside container");
    InterferenceReport rep;
    for (const auto& p : layout.placements) {
        const ModuleSpec& m = *layout.find_module(p.module_id);
        const long long cols = detail::interval_overlap(p.x, m.width, x, w);
        rep.interruption[p.module_id] = cols * time_per_column;
        if (cols > 0) ++rep.interrupted_modules;
    }
    return rep;
}

struct MetricsReport {
    long long free_area = 0;
    FreeRect max_free_rect;
    FreeColumns free_cols;

    friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

inline MetricsReport compute_metrics(const Layout& layout) {
    return MetricsReport{free_area(layout), max_free_rectangle(layout), free_columns(layout)};
}

}  // namespace packclass

#endif  // PACKCLASS_GEOMETRY_HPP
