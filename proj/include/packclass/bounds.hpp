#ifndef PACKCLASS_BOUNDS_HPP
#define PACKCLASS_BOUNDS_HPP

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "packclass/geometry.hpp"

// Simple column-count bounds bracketing the strip search: the volume lower
// bound and shelf-packing upper bounds (next/first/best-fit decreasing).
// Shelves are vertical slices of the strip, as wide as their first module;
// modules stack row-wise inside a shelf while the container height allows.

namespace packclass {

enum class ShelfStrategy { NextFit, FirstFit, BestFit };

inline const char* to_string(ShelfStrategy s) {
    switch (s) {
        case ShelfStrategy::NextFit: return "next-fit";
        case ShelfStrategy::FirstFit: return "first-fit";
        default: return "best-fit";
    }
}

inline int volume_lower_bound(const std::vector<ModuleSpec>& modules, int height) {
    if (height < 1) throw std::invalid_argument("volume_lower_bound: height must be positive");
    long long area = 0;
    for (const auto& m : modules) area += m.area();
    return static_cast<int>((area + height - 1) / height);
}

namespace detail {

inline std::vector<ModuleSpec> sorted_for_shelves(std::vector<ModuleSpec> mods) {
    std::sort(mods.begin(), mods.end(), [](const ModuleSpec& a, const ModuleSpec& b) {
        if (a.width != b.width) return a.width > b.width;
        if (a.height != b.height) return a.height > b.height;
        return a.id < b.id;
    });
    return mods;
}

}  // namespace detail

inline Layout shelf_pack(const std::vector<ModuleSpec>& modules, int height,
                         ShelfStrategy strategy) {
    if (height < 1) throw std::invalid_argument("shelf_pack: height must be positive");
    for (const auto& m : modules) {
        if (m.width < 1 || m.height < 1)
            throw std::invalid_argument("shelf_pack: non-positive module extent");
        if (m.height > height)
            throw std::invalid_argument("shelf_pack: module '" + m.id +
                                        "' taller than the strip");
    }

    struct Shelf {
        int x;
        int width;
        int used_height;
    };
    std::vector<Shelf> shelves;
    int next_x = 0;

    Layout out;
    const auto sorted = detail::sorted_for_shelves(modules);
    for (const auto& m : sorted) {
        out.modules[m.id] = m;
        int target = -1;
        switch (strategy) {
            case ShelfStrategy::NextFit:
                if (!shelves.empty()) {
                    const Shelf& s = shelves.back();
                    if (m.width <= s.width && s.used_height + m.height <= height)
                        target = static_cast<int>(shelves.size()) - 1;
                }
                break;
            case ShelfStrategy::FirstFit:
                for (std::size_t i = 0; i < shelves.size(); ++i)
                    if (m.width <= shelves[i].width &&
                        shelves[i].used_height + m.height <= height) {
                        target = static_cast<int>(i);
                        break;
                    }
                break;
            case ShelfStrategy::BestFit: {
                int best_left = -1;
                for (std::size_t i = 0; i < shelves.size(); ++i) {
                    const Shelf& s = shelves[i];
                    if (m.width > s.width || s.used_height + m.height > height) continue;
                    const int left = height - s.used_height;
                    if (target < 0 || left < best_left) {
                        target = static_cast<int>(i);
                        best_left = left;
                    }
                }
                break;
            }
        }
        if (target < 0) {
            shelves.push_back({next_x, m.width, 0});
            next_x += m.width;
            target = static_cast<int>(shelves.size()) - 1;
        }
        Shelf& s = shelves[target];
        out.placements.push_back({m.id, s.x, s.used_height});
        s.used_height += m.height;
    }

    out.container = {std::max(next_x, 1), height};
    return out;
}

inline int layout_width(const Layout& layout) {
    int w = 0;
    for (const auto& p : layout.placements)
        w = std::max(w, p.x + layout.find_module(p.module_id)->width);
    return w;
}

struct Bounds {
    int lower = 0;
    int upper = 0;
    Layout upper_layout;
};

// lower = volume bound; upper = best of the three shelf heuristics, with
// the winning layout kept as the feasibility witness.
inline Bounds compute_bounds(const std::vector<ModuleSpec>& modules, int height) {
    Bounds b;
    b.lower = volume_lower_bound(modules, height);
    b.upper_layout = Layout{{1, height}, {}, {}};
    bool first = true;
    for (const ShelfStrategy s :
         {ShelfStrategy::NextFit, ShelfStrategy::FirstFit, ShelfStrategy::BestFit}) {
        Layout l = shelf_pack(modules, height, s);
        const int w = layout_width(l);
        if (first || w < b.upper) {
            b.upper = w;
            l.container.width = std::max(w, 1);
            b.upper_layout = std::move(l);
            first = false;
        }
    }
    return b;
}

}  // namespace packclass

#endif  // PACKCLASS_BOUNDS_HPP
