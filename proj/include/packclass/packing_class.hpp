#ifndef PACKCLASS_PACKING_CLASS_HPP
#define PACKCLASS_PACKING_CLASS_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "packclass/geometry.hpp"
#include "packclass/graphs.hpp"

// Packing classes: a pair of per-axis component graphs over the modules,
// held as symmetric edge-state matrices. An edge is In when the projected
// intervals of the two modules intersect on that axis, Out when they are
// disjoint, Free while the search has not decided yet.
//
// A complete state is a packing class when
//   C1  each component graph is an interval graph,
//   C2  every stable set fits the container extent on its axis,
//   C3  no pair of modules overlaps on both axes.
// Complete packing classes and feasible packings decide the same instances,
// which is what lets the solver branch on edge states instead of coordinates.

namespace packclass {

enum class EdgeState : std::uint8_t { Free, Out, In };

inline char edge_state_symbol(EdgeState s) {
    switch (s) {
        case EdgeState::In: return '1';
        case EdgeState::Out: return '0';
        default: return '?';
    }
}

struct EdgeFix {
    int dim = 0;
    int u = 0;
    int v = 0;
    EdgeState value = EdgeState::Free;

    friend bool operator==(const EdgeFix&, const EdgeFix&) = default;
};

class PackingClassState {
public:
    PackingClassState() = default;

    PackingClassState(const std::vector<ModuleSpec>& modules, Container box)
        : n_(static_cast<int>(modules.size())), box_{box.width, box.height} {
        if (n_ > SimpleGraph::kMaxVertices)
            throw std::invalid_argument("PackingClassState: too many modules");
        extent_[0].reserve(modules.size());
        extent_[1].reserve(modules.size());
        for (const auto& m : modules) {
            if (m.width < 1 || m.height < 1)
                throw std::invalid_argument("PackingClassState: non-positive module extent");
            extent_[0].push_back(m.width);
            extent_[1].push_back(m.height);
        }
        edges_[0].assign(static_cast<std::size_t>(n_) * n_, EdgeState::Free);
        edges_[1].assign(static_cast<std::size_t>(n_) * n_, EdgeState::Free);
        free_count_ = n_ * (n_ - 1);  // both dimensions
    }

    int module_count() const { return n_; }
    int container_extent(int dim) const { return box_[dim]; }
    int extent(int dim, int v) const { return extent_[dim][v]; }

    EdgeState edge(int dim, int u, int v) const {
        return edges_[dim][static_cast<std::size_t>(u) * n_ + v];
    }

    // Unconditional write; search code should go through propagate().
    void set_edge(int dim, int u, int v, EdgeState value) {
        auto& a = edges_[dim][static_cast<std::size_t>(u) * n_ + v];
        auto& b = edges_[dim][static_cast<std::size_t>(v) * n_ + u];
        if (a == EdgeState::Free && value != EdgeState::Free) free_count_--;
        if (a != EdgeState::Free && value == EdgeState::Free) free_count_++;
        a = value;
        b = value;
    }

    bool complete() const { return free_count_ == 0; }
    int free_edge_count() const { return free_count_; }

    SimpleGraph in_graph(int dim) const {
        SimpleGraph g(n_);
        for (int u = 0; u < n_; ++u)
            for (int v = u + 1; v < n_; ++v)
                if (edge(dim, u, v) == EdgeState::In) g.add_edge(u, v);
        return g;
    }

    SimpleGraph out_graph(int dim) const {
        SimpleGraph g(n_);
        for (int u = 0; u < n_; ++u)
            for (int v = u + 1; v < n_; ++v)
                if (edge(dim, u, v) == EdgeState::Out) g.add_edge(u, v);
        return g;
    }

    // Matrices per dimension with 1 = In, 0 = Out, ? = Free, '.' diagonal.
    std::string debug_dump() const {
        std::string out;
        for (int dim = 0; dim < 2; ++dim) {
            out += "dim " + std::to_string(dim) + "\n";
            for (int u = 0; u < n_; ++u) {
                for (int v = 0; v < n_; ++v)
                    out += (u == v) ? '.' : edge_state_symbol(edge(dim, u, v));
                out += '\n';
            }
        }
        return out;
    }

    friend bool operator==(const PackingClassState&, const PackingClassState&) = default;

private:
    int n_ = 0;
    std::array<int, 2> box_{1, 1};
    std::vector<int> extent_[2];
    std::vector<EdgeState> edges_[2];
    int free_count_ = 0;
};

// Vertex order used by from_layout: placed module ids, ascending.
inline std::vector<std::string> placed_ids_sorted(const Layout& layout) {
    std::vector<std::string> ids;
    ids.reserve(layout.placements.size());
    for (const auto& p : layout.placements) ids.push_back(p.module_id);
    std::sort(ids.begin(), ids.end());
    return ids;
}

// Projects the placed modules onto both axes; a pair is In on an axis iff
// the projected half-open intervals intersect. The result is complete.
inline PackingClassState from_layout(const Layout& layout) {
    require_valid(layout, "from_layout");
    const auto ids = placed_ids_sorted(layout);

    std::vector<ModuleSpec> mods;
    std::vector<Placement> pos;
    mods.reserve(ids.size());
    for (const auto& id : ids) {
        mods.push_back(*layout.find_module(id));
        for (const auto& p : layout.placements)
            if (p.module_id == id) pos.push_back(p);
    }

    PackingClassState state(mods, layout.container);
    const int n = state.module_count();
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
            const bool ox = detail::interval_overlap(pos[u].x, mods[u].width, pos[v].x,
                                                     mods[v].width) > 0;
            const bool oy = detail::interval_overlap(pos[u].y, mods[u].height, pos[v].y,
                                                     mods[v].height) > 0;
            state.set_edge(0, u, v, ox ? EdgeState::In : EdgeState::Out);
            state.set_edge(1, u, v, oy ? EdgeState::In : EdgeState::Out);
        }
    return state;
}

struct ConditionReport {
    bool c1[2] = {false, false};  // component graph is an interval graph
    bool c2[2] = {false, false};  // stable sets fit the container extent
    bool c3 = false;              // no pair In on both axes

    bool all_ok() const { return c1[0] && c1[1] && c2[0] && c2[1] && c3; }
};

inline ConditionReport check_conditions(const PackingClassState& state) {
    if (!state.complete())
        throw std::invalid_argument("check_conditions: state has Free edges");
    const int n = state.module_count();
    ConditionReport rep;
    rep.c3 = true;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (state.edge(0, u, v) == EdgeState::In && state.edge(1, u, v) == EdgeState::In)
                rep.c3 = false;
    for (int dim = 0; dim < 2; ++dim) {
        const SimpleGraph g = state.in_graph(dim);
        rep.c1[dim] = is_interval_graph(g);
        std::vector<long long> w(static_cast<std::size_t>(n));
        for (int v = 0; v < n; ++v) w[v] = state.extent(dim, v);
        rep.c2[dim] = max_weight_stable_set(g, w).weight <= state.container_extent(dim);
    }
    return rep;
}

struct PropagationResult {
    bool conflict = false;
    std::vector<EdgeFix> fixes;  // cascade beyond the seed, in discovery order
};

namespace detail {

class Propagator {
public:
    // record=false skips collecting the cascade (the search only counts it)
    Propagator(PackingClassState& s, PropagationResult& res, bool record = true)
        : s_(s), res_(res), record_(record) {
        work_.reserve(16);
    }

    long long fix_count() const { return fix_count_; }

    bool apply(int dim, int u, int v, EdgeState value, bool is_seed) {
        const EdgeState cur = s_.edge(dim, u, v);
        if (cur == value) return true;
        if (cur != EdgeState::Free) {
            res_.conflict = true;
            return false;
        }
        s_.set_edge(dim, u, v, value);
        if (!is_seed) {
            ++fix_count_;
            if (record_) res_.fixes.push_back({dim, u, v, value});
        }
        work_.push_back({dim, u, v, value});
        return true;
    }

    bool run() {
        while (true) {
            while (next_ < work_.size()) {
                const EdgeFix f = work_[next_++];
                if (f.value == EdgeState::In) {
                    // C3: overlap on one axis forces separation on the other.
                    if (!apply(1 - f.dim, f.u, f.v, EdgeState::Out, false)) return false;
                } else {
                    out_dirty_[f.dim] = true;
                }
                if (!scan_c4(f)) return false;
            }
            if (!out_dirty_[0] && !out_dirty_[1]) return true;
            for (int dim = 0; dim < 2; ++dim) {
                if (!out_dirty_[dim]) continue;
                out_dirty_[dim] = false;
                if (!sweep_stable_sets(dim)) return false;
            }
        }
    }

    // Full sweep from an arbitrary consistent state; used at the search root
    // where pair-extent constraints already force edges.
    bool run_from_scratch() {
        out_dirty_[0] = out_dirty_[1] = true;
        return run();
    }

private:
    // Induced chordless 4-cycles are forbidden in the In-graph. For every
    // 4-subset through the fixed pair, each of the three cycle/chord splits
    // is checked; a fully matching split conflicts, one Free slot gets fixed
    // to break the cycle.
    bool scan_c4(const EdgeFix& f) {
        const int n = s_.module_count();
        for (int w = 0; w < n; ++w) {
            if (w == f.u || w == f.v) continue;
            for (int x = w + 1; x < n; ++x) {
                if (x == f.u || x == f.v) continue;
                const int q[4] = {f.u, f.v, w, x};
                static constexpr int kMatchings[3][4] = {
                    {0, 1, 2, 3},  // chords (q0,q1),(q2,q3)
                    {0, 2, 1, 3},
                    {0, 3, 1, 2},
                };
                for (const auto& m : kMatchings) {
                    if (!check_split(f.dim, q[m[0]], q[m[1]], q[m[2]], q[m[3]])) return false;
                }
            }
        }
        return true;
    }

    // Chords (a,b) and (c,d); cycle a-c-b-d-a. Forbidden: cycle In, chords Out.
    bool check_split(int dim, int a, int b, int c, int d) {
        const EdgeFix slots[6] = {
            {dim, a, b, EdgeState::Out}, {dim, c, d, EdgeState::Out},
            {dim, a, c, EdgeState::In},  {dim, c, b, EdgeState::In},
            {dim, b, d, EdgeState::In},  {dim, d, a, EdgeState::In},
        };
        int free_idx = -1;
        for (int i = 0; i < 6; ++i) {
            const EdgeState cur = s_.edge(dim, slots[i].u, slots[i].v);
            if (cur == EdgeState::Free) {
                if (free_idx >= 0) return true;  // two open slots, nothing forced
                free_idx = i;
            } else if (cur != slots[i].value) {
                return true;  // split cannot complete
            }
        }
        if (free_idx < 0) {
            res_.conflict = true;
            return false;
        }
        const EdgeFix& slot = slots[free_idx];
        const EdgeState avoid = slot.value;
        const EdgeState forced = avoid == EdgeState::In ? EdgeState::Out : EdgeState::In;
        return apply(dim, slot.u, slot.v, forced, false);
    }

    // Modules pairwise separated on an axis stack along it, so their extents
    // must fit the container there. Conflict when the heaviest pairwise-Out
    // set already exceeds the extent; a Free pair whose Out would complete
    // such a set is forced In.
    // True when some subset of cand, pairwise separated (stable in the
    // not-Out graph given by nb), pushes base past cap. Allocation-free and
    // exits on the first witness.
    static bool stacked_extent_exceeds(const std::uint64_t* nb, const int* wt, std::uint64_t cand,
                                       long long base, long long reach, long long cap) {
        if (base > cap) return true;
        if (reach <= cap) return false;
        while (cand) {
            const int v = std::countr_zero(cand);
            const std::uint64_t bit = std::uint64_t{1} << v;
            cand &= ~bit;
            const std::uint64_t rest = cand & ~nb[v];
            long long rest_reach = base + wt[v];
            for (std::uint64_t m = rest; m;) {
                const int z = std::countr_zero(m);
                m &= m - 1;
                rest_reach += wt[z];
            }
            if (stacked_extent_exceeds(nb, wt, rest, base + wt[v], rest_reach, cap)) return true;
            reach -= wt[v];
            if (reach <= cap) return false;
        }
        return false;
    }

    bool sweep_stable_sets(int dim) {
        const int n = s_.module_count();
        const long long cap = s_.container_extent(dim);

        std::uint64_t nb[64];  // adjacency of pairs not (yet) separated on this axis
        int wt[64];
        long long total = 0;
        for (int v = 0; v < n; ++v) {
            nb[v] = 0;
            wt[v] = s_.extent(dim, v);
            total += wt[v];
        }
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v)
                if (s_.edge(dim, u, v) != EdgeState::Out) {
                    nb[u] |= std::uint64_t{1} << v;
                    nb[v] |= std::uint64_t{1} << u;
                }
        const std::uint64_t all =
            n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;

        if (stacked_extent_exceeds(nb, wt, all, 0, total, cap)) {
            res_.conflict = true;
            return false;
        }

        for (int a = 0; a < n; ++a) {
            for (int b = a + 1; b < n; ++b) {
                if (s_.edge(dim, a, b) != EdgeState::Free) continue;
                // vertices already separated from both endpoints
                const std::uint64_t allowed = ~nb[a] & ~nb[b] & all &
                                              ~(std::uint64_t{1} << a) &
                                              ~(std::uint64_t{1} << b);
                long long reach = wt[a] + wt[b];
                for (std::uint64_t m = allowed; m;) {
                    const int z = std::countr_zero(m);
                    m &= m - 1;
                    reach += wt[z];
                }
                if (reach <= cap) continue;
                if (stacked_extent_exceeds(nb, wt, allowed, wt[a] + wt[b], reach, cap)) {
                    if (!apply(dim, a, b, EdgeState::In, false)) return false;
                }
            }
        }
        return true;
    }

    PackingClassState& s_;
    PropagationResult& res_;
    bool record_;
    long long fix_count_ = 0;
    std::vector<EdgeFix> work_;
    std::size_t next_ = 0;
    bool out_dirty_[2] = {false, false};
};

}  // namespace detail

// Applies just_fixed and cascades forced fixes to a fixpoint. Conflict is a
// normal return; the state is then partially updated and should be discarded
// by the caller (search states are cheap copies).
inline PropagationResult propagate(PackingClassState& state, const EdgeFix& just_fixed) {
    PropagationResult res;
    detail::Propagator prop(state, res);
    if (!prop.apply(just_fixed.dim, just_fixed.u, just_fixed.v, just_fixed.value, true))
        return res;
    prop.run();
    return res;
}

// Fixpoint pass with no seed; establishes the initial forced edges of a
// fresh state (pairs too large to sit side by side, and their cascades).
inline PropagationResult propagate_root(PackingClassState& state) {
    PropagationResult res;
    detail::Propagator prop(state, res);
    prop.run_from_scratch();
    return res;
}

namespace detail {

// Search-path variant: applies and cascades without materializing the fix
// list; returns false on conflict and adds the cascade size to fix_count.
inline bool propagate_counted(PackingClassState& state, const EdgeFix& just_fixed,
                              long long& fix_count) {
    PropagationResult res;
    Propagator prop(state, res, false);
    if (prop.apply(just_fixed.dim, just_fixed.u, just_fixed.v, just_fixed.value, true))
        prop.run();
    fix_count += prop.fix_count();
    return !res.conflict;
}

}  // namespace detail

// Turns a complete packing class into coordinates: per axis, transitively
// orient the separations (Out pairs) and place every module behind the
// longest extent-weighted chain of predecessors. C2 bounds each chain by
// the container extent, and C3 guarantees some axis separates every pair,
// so the result is always a valid layout.
inline Layout extract_layout(const PackingClassState& state,
                             const std::vector<ModuleSpec>& modules, Container container) {
    const int n = state.module_count();
    if (static_cast<int>(modules.size()) != n)
        throw std::invalid_argument("extract_layout: module count mismatch");
    if (!state.complete())
        throw std::invalid_argument("extract_layout: state has Free edges");
    if (!check_conditions(state).all_ok())
        throw std::invalid_argument("extract_layout: state is not a packing class");

    std::array<std::vector<int>, 2> coord;
    for (int dim = 0; dim < 2; ++dim) {
        const SimpleGraph separated = state.out_graph(dim);
        const auto orient = find_transitive_orientation(separated);
        if (!orient)
            throw std::logic_error("extract_layout: separation graph not orientable");
        auto& c = coord[dim];
        c.assign(static_cast<std::size_t>(n), 0);
        // Longest-path relaxation; the orientation is acyclic, so n passes
        // reach the fixpoint.
        for (int pass = 0; pass < n; ++pass) {
            bool changed = false;
            for (int v = 0; v < n; ++v)
                for (int u = 0; u < n; ++u) {
                    if (!orient->oriented(u, v)) continue;
                    const int via = c[u] + state.extent(dim, u);
                    if (via > c[v]) {
                        c[v] = via;
                        changed = true;
                    }
                }
            if (!changed) break;
        }
    }

    Layout out;
    out.container = container;
    for (int v = 0; v < n; ++v) {
        out.modules[modules[v].id] = modules[v];
        out.placements.push_back({modules[v].id, coord[0][v], coord[1][v]});
    }
    return out;
}

}  // namespace packclass

#endif  // PACKCLASS_PACKING_CLASS_HPP
