#ifndef PACKCLASS_OPP_HPP
#define PACKCLASS_OPP_HPP

#include <algorithm>
#include <bit>
#include <chrono>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "packclass/geometry.hpp"
#include "packclass/packing_class.hpp"

// The orthogonal packing decision problem: do the given modules fit into the
// container, axis-aligned, without rotation? solve_opp runs a depth-first
// branch and bound over edge states with condition propagation; a complete
// state that passes all packing-class conditions is turned into coordinates,
// an exhausted tree is a proof of infeasibility.
//
// brute_force_opp enumerates placements directly. It shares no search code
// with solve_opp and exists as the ground-truth oracle for small instances.

namespace packclass {

enum class OppVerdict { Feasible, Infeasible, Unknown };

inline const char* to_string(OppVerdict v) {
    switch (v) {
        case OppVerdict::Feasible: return "feasible";
        case OppVerdict::Infeasible: return "infeasible";
        default: return "unknown";
    }
}

struct SearchStats {
    long long nodes = 0;
    long long conflicts = 0;
    long long propagated_fixes = 0;
    int max_depth = 0;
    double elapsed_seconds = 0.0;
};

struct SolveLimits {
    long long max_nodes = 10'000'000;
    double max_seconds = 60.0;
};

struct OppResult {
    OppVerdict verdict = OppVerdict::Unknown;
    std::optional<Layout> layout;                   // set when Feasible
    std::optional<PackingClassState> packing_class; // set when Feasible
    std::vector<ModuleSpec> class_modules;          // vertex order of packing_class
    SearchStats stats;

    bool feasible() const { return verdict == OppVerdict::Feasible; }
};

namespace detail {

inline void validate_modules(const std::vector<ModuleSpec>& modules) {
    std::set<std::string> ids;
    for (const auto& m : modules) {
        if (m.width < 1 || m.height < 1)
            throw std::invalid_argument("module '" + m.id + "' has non-positive extent");
        if (!ids.insert(m.id).second)
            throw std::invalid_argument("duplicate module id '" + m.id + "'");
    }
}

// Edge-state DFS over a static module order (area descending). All pairs
// inside the current prefix are decided before the next module joins, which
// keeps a fully decided front whose In-graph can be re-verified as an
// interval graph after every step (the property is hereditary on induced
// subgraphs). Runs of identical modules get lex-ordered neighborhoods, which
// removes the permutation symmetry that otherwise dominates these instances.
class OppSearch {
public:
    OppSearch(std::vector<ModuleSpec> ranked, Container box, SolveLimits limits,
              int solutions_wanted = 1)
        : modules_(std::move(ranked)), box_(box), limits_(limits),
          want_(std::max(1, solutions_wanted)), start_(std::chrono::steady_clock::now()) {
        const int n = static_cast<int>(modules_.size());
        twin_below_.assign(n, false);
        for (int r = 0; r + 1 < n; ++r)
            twin_below_[r] = modules_[r].width == modules_[r + 1].width &&
                             modules_[r].height == modules_[r + 1].height;
    }

    static std::vector<ModuleSpec> rank_modules(std::vector<ModuleSpec> mods) {
        std::stable_sort(mods.begin(), mods.end(), [](const ModuleSpec& a, const ModuleSpec& b) {
            if (a.area() != b.area()) return a.area() > b.area();
            if (a.width != b.width) return a.width > b.width;
            if (a.height != b.height) return a.height > b.height;
            return a.id < b.id;
        });
        return mods;
    }

    OppResult run() {
        OppResult res;
        res.class_modules = modules_;
        PackingClassState root(modules_, box_);
        nodes_ = 1;

        auto rootprop = propagate_root(root);
        fixes_ = static_cast<long long>(rootprop.fixes.size());
        Outcome out;
        if (rootprop.conflict) {
            conflicts_ = 1;
            out = Outcome::Exhausted;
        } else {
            out = dfs(root, 0, prefix_len(root, 0), prefix_len(root, 1));
        }
        if (!layouts_.empty())
            res.verdict = OppVerdict::Feasible;
        else
            res.verdict =
                out == Outcome::Budget ? OppVerdict::Unknown : OppVerdict::Infeasible;
        if (res.feasible()) {
            res.layout = layouts_.front();
            res.packing_class = std::move(found_class_);
        }
        finish(res);
        return res;
    }

    // Layouts collected so far, one per complete packing class in DFS order.
    std::vector<Layout>& layouts() { return layouts_; }

private:
    enum class Outcome { Found, Exhausted, Budget };

    void finish(OppResult& res) {
        res.stats.nodes = nodes_;
        res.stats.conflicts = conflicts_;
        res.stats.propagated_fixes = fixes_;
        res.stats.max_depth = depth_seen_;
        res.stats.elapsed_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

    bool over_budget() {
        if (nodes_ > limits_.max_nodes) return true;
        if ((nodes_ & 0xFFF) == 0) {
            const double t =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
            if (t > limits_.max_seconds) return true;
        }
        return false;
    }

    // First Free slot in prefix order: all edges of modules 0..v-1 settle
    // before module v's do. Dimension 0 first when both are open.
    std::optional<EdgeFix> select_slot(const PackingClassState& s) const {
        const int n = s.module_count();
        for (int v = 1; v < n; ++v)
            for (int u = 0; u < v; ++u)
                for (int dim = 0; dim < 2; ++dim)
                    if (s.edge(dim, u, v) == EdgeState::Free)
                        return EdgeFix{dim, u, v, EdgeState::Free};
        return std::nullopt;
    }

    // Modules 0..p-1 have all pairwise edges decided on this axis.
    int prefix_len(const PackingClassState& s, int dim) const {
        const int n = s.module_count();
        for (int v = 1; v < n; ++v)
            for (int u = 0; u < v; ++u)
                if (s.edge(dim, u, v) == EdgeState::Free) return v;
        return n;
    }

    bool prefix_is_interval(const PackingClassState& s, int dim, int p) const {
        // shorter prefixes cannot fail: induced C4s are already caught by
        // propagation, and any other violation needs five vertices
        if (p < 5) return true;
        SimpleGraph g(p);
        for (int i = 0; i < p; ++i)
            for (int j = i + 1; j < p; ++j)
                if (s.edge(dim, i, j) == EdgeState::In) g.add_edge(i, j);
        return is_interval_graph(g);
    }

    // Identical modules are interchangeable; keep only states whose decided
    // edge matrix is lexicographically minimal under swapping two adjacent
    // twins. The walk stops at the first undecided slot, so the constraint
    // only ever discards provably redundant branches.
    bool twin_symmetry_ok(const PackingClassState& s) const {
        const int n = s.module_count();
        for (int r = 0; r + 1 < n; ++r) {
            if (!twin_below_[r]) continue;
            const int u = r;
            const int v = r + 1;
            bool resolved = false;
            bool violated = false;
            for (int j = 1; j < n && !resolved; ++j)
                for (int i = 0; i < j && !resolved; ++i)
                    for (int dim = 0; dim < 2; ++dim) {
                        int ti = i == u ? v : (i == v ? u : i);
                        int tj = j == u ? v : (j == v ? u : j);
                        if (ti > tj) std::swap(ti, tj);
                        if (ti == i && tj == j) continue;
                        const EdgeState a = s.edge(dim, i, j);
                        const EdgeState b = s.edge(dim, ti, tj);
                        if (a == EdgeState::Free || b == EdgeState::Free) {
                            resolved = true;
                            break;
                        }
                        if (a == b) continue;
                        violated = a == EdgeState::In;  // In sorts above Out
                        resolved = true;
                        break;
                    }
            if (violated) return false;
        }
        return true;
    }

    Outcome dfs(const PackingClassState& state, int depth, int pre0, int pre1) {
        depth_seen_ = std::max(depth_seen_, depth);

        const auto slot = select_slot(state);
        if (!slot) {
            const auto rep = check_conditions(state);
            if (rep.all_ok()) {
                layouts_.push_back(extract_layout(state, modules_, box_));
                if (layouts_.size() == 1) found_class_ = state;
                if (static_cast<int>(layouts_.size()) >= want_) return Outcome::Found;
                return Outcome::Exhausted;  // keep enumerating siblings
            }
            ++conflicts_;
            return Outcome::Exhausted;
        }

        // In before Out: overlap edges trigger the heavier cascades first.
        for (const EdgeState value : {EdgeState::In, EdgeState::Out}) {
            ++nodes_;
            if (over_budget()) return Outcome::Budget;
            PackingClassState child = state;
            bool ok = propagate_counted(child, {slot->dim, slot->u, slot->v, value}, fixes_) &&
                      twin_symmetry_ok(child);
            int q0 = pre0;
            int q1 = pre1;
            if (ok) {
                q0 = prefix_len(child, 0);
                q1 = prefix_len(child, 1);
                ok = (q0 <= pre0 || prefix_is_interval(child, 0, q0)) &&
                     (q1 <= pre1 || prefix_is_interval(child, 1, q1));
            }
            if (!ok) {
                ++conflicts_;
                continue;
            }
            const Outcome sub = dfs(child, depth + 1, q0, q1);
            if (sub != Outcome::Exhausted) return sub;
        }
        return Outcome::Exhausted;
    }

    std::vector<ModuleSpec> modules_;  // rank order: area desc, then extent, then id
    std::vector<bool> twin_below_;
    Container box_;
    SolveLimits limits_;
    int want_;
    std::chrono::steady_clock::time_point start_;
    long long nodes_ = 0;
    long long conflicts_ = 0;
    long long fixes_ = 0;
    int depth_seen_ = 0;
    std::vector<Layout> layouts_;
    std::optional<PackingClassState> found_class_;
};

}  // namespace detail

inline OppResult solve_opp(const std::vector<ModuleSpec>& modules, Container container,
                           SolveLimits limits = {}) {
    detail::validate_modules(modules);
    if (container.width < 1 || container.height < 1)
        throw std::invalid_argument("solve_opp: container extents must be positive");

    OppResult res;
    if (modules.empty()) {
        res.verdict = OppVerdict::Feasible;
        res.layout = Layout{container, {}, {}};
        res.packing_class = PackingClassState({}, container);
        return res;
    }

    // Stage-one rejection: per-module fit and the area bound.
    long long area = 0;
    for (const auto& m : modules) {
        area += m.area();
        if (m.width > container.width || m.height > container.height) {
            res.verdict = OppVerdict::Infeasible;
            res.stats.nodes = 1;
            return res;
        }
    }
    if (area > container.area()) {
        res.verdict = OppVerdict::Infeasible;
        res.stats.nodes = 1;
        return res;
    }

    detail::OppSearch search(detail::OppSearch::rank_modules(modules), container, limits);
    return search.run();
}

// Up to max_solutions feasible layouts, one per packing class (up to the
// interchange of identical modules), in the deterministic DFS order.
inline std::vector<Layout> enumerate_opp_layouts(const std::vector<ModuleSpec>& modules,
                                                 Container container, int max_solutions,
                                                 SolveLimits limits = {}) {
    detail::validate_modules(modules);
    if (modules.empty()) return {Layout{container, {}, {}}};
    for (const auto& m : modules)
        if (m.width > container.width || m.height > container.height) return {};
    long long area = 0;
    for (const auto& m : modules) area += m.area();
    if (area > container.area()) return {};

    detail::OppSearch search(detail::OppSearch::rank_modules(modules), container, limits,
                             max_solutions);
    search.run();
    return std::move(search.layouts());
}

// Exhaustive placement enumeration with pairwise-overlap pruning. Refuses
// instances whose raw position space exceeds the cap; intended for tests
// and cross-checks, not production solving.
struct BruteForceResult {
    bool feasible = false;
    std::optional<Layout> layout;
};

inline BruteForceResult brute_force_opp(const std::vector<ModuleSpec>& modules,
                                        Container container,
                                        double max_positions = 5e8) {
    detail::validate_modules(modules);
    if (container.width < 1 || container.height < 1)
        throw std::invalid_argument("brute_force_opp: container extents must be positive");

    double space = 1.0;
    for (const auto& m : modules) {
        const double px = container.width - m.width + 1;
        const double py = container.height - m.height + 1;
        if (px <= 0 || py <= 0) return {false, std::nullopt};
        space *= px * py;
        if (space > max_positions)
            throw std::runtime_error("brute_force_opp: search space exceeds cap");
    }

    const int W = container.width;
    const int H = container.height;
    std::vector<char> grid(static_cast<std::size_t>(W) * H, 0);
    std::vector<Placement> placed;
    placed.reserve(modules.size());

    auto fits = [&](const ModuleSpec& m, int x, int y) {
        for (int yy = y; yy < y + m.height; ++yy)
            for (int xx = x; xx < x + m.width; ++xx)
                if (grid[static_cast<std::size_t>(yy) * W + xx]) return false;
        return true;
    };
    auto paint = [&](const ModuleSpec& m, int x, int y, char val) {
        for (int yy = y; yy < y + m.height; ++yy)
            for (int xx = x; xx < x + m.width; ++xx)
                grid[static_cast<std::size_t>(yy) * W + xx] = val;
    };

    // Larger modules first; order does not affect the verdict.
    std::vector<int> order(modules.size());
    for (std::size_t i = 0; i < modules.size(); ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return modules[a].area() > modules[b].area(); });

    auto rec = [&](auto&& self, std::size_t k) -> bool {
        if (k == order.size()) return true;
        const ModuleSpec& m = modules[order[k]];
        for (int y = 0; y + m.height <= H; ++y)
            for (int x = 0; x + m.width <= W; ++x) {
                if (!fits(m, x, y)) continue;
                paint(m, x, y, 1);
                placed.push_back({m.id, x, y});
                if (self(self, k + 1)) return true;
                placed.pop_back();
                paint(m, x, y, 0);
            }
        return false;
    };

    BruteForceResult out;
    out.feasible = rec(rec, 0);
    if (out.feasible) {
        Layout l;
        l.container = container;
        for (const auto& m : modules) l.modules[m.id] = m;
        l.placements = placed;
        out.layout = std::move(l);
    }
    return out;
}

}  // namespace packclass

#endif  // PACKCLASS_OPP_HPP
