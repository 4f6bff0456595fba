#include <doctest.h>

#include <cmath>
#include <map>

#include "packclass/strip.hpp"
#include "packclass/rng.hpp"
#include "oracles.hpp"

using namespace packclass;

namespace {

std::vector<ModuleSpec> random_instance(SplitMix64& rng, int max_modules, int height) {
    const int n = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_modules)));
    std::vector<ModuleSpec> mods;
    for (int i = 0; i < n; ++i)
        mods.push_back({"r" + std::to_string(i), rng.range(1, 4), rng.range(1, height), 0});
    return mods;
}

}  // namespace

TEST_CASE("tight bounds close the search without probes") {
    const std::vector<ModuleSpec> mods{
        {"a", 3, 4, 0}, {"b", 2, 2, 0}, {"c", 2, 2, 0}, {"d", 1, 3, 0}};
    const auto r = min_strip_width(mods, 4);
    CHECK(r.optimal_width == 6);
    CHECK(r.probes.empty());
    CHECK(validate_layout(r.layout).empty());
}

TEST_CASE("a single module needs exactly its own width") {
    const auto r = min_strip_width({{"solo", 4, 2, 0}}, 5);
    CHECK(r.optimal_width == 4);
    CHECK(layout_width(r.layout) == 4);
}

TEST_CASE("the empty instance needs no columns") {
    const auto r = min_strip_width({}, 5);
    CHECK(r.optimal_width == 0);
    CHECK(r.layout.placements.empty());
}

TEST_CASE("min_strip_width equals the scan oracle") {
    SplitMix64 rng(67);
    for (int t = 0; t < 150; ++t) {
        const int H = rng.range(2, 6);
        const auto mods = random_instance(rng, 5, H);
        const auto r = min_strip_width(mods, H);
        CHECK(r.optimal_width == oracles::min_width_scan(mods, H));
        CHECK(validate_layout(r.layout).empty());
        CHECK(layout_width(r.layout) == r.optimal_width);
    }
}

TEST_CASE("the optimum is certified one column below") {
    SplitMix64 rng(71);
    int certified = 0;
    for (int t = 0; t < 60; ++t) {
        const int H = rng.range(2, 6);
        const auto mods = random_instance(rng, 4, H);
        const auto r = min_strip_width(mods, H);
        if (r.optimal_width <= volume_lower_bound(mods, H)) continue;
        const auto below = solve_opp(mods, {r.optimal_width - 1, H});
        CHECK(below.verdict == OppVerdict::Infeasible);
        ++certified;
    }
    CHECK(certified > 5);
}

TEST_CASE("probe count stays within the bisection budget") {
    SplitMix64 rng(73);
    for (int t = 0; t < 100; ++t) {
        const int H = rng.range(2, 6);
        const auto mods = random_instance(rng, 5, H);
        const Bounds b = compute_bounds(mods, H);
        const auto r = min_strip_width(mods, H);
        const int span = b.upper - b.lower + 1;
        const int budget = static_cast<int>(std::ceil(std::log2(span))) + 1;
        CHECK(static_cast<int>(r.probes.size()) <= budget);
    }
}

TEST_CASE("a starved probe raises StripBudgetError with bounds") {
    // ten mixed modules whose probes need genuine branching; a two-node
    // budget cannot finish the first probe
    const std::vector<ModuleSpec> mods{
        {"a", 2, 4, 0}, {"b", 2, 4, 0}, {"c", 1, 4, 0}, {"d", 1, 3, 0}, {"e", 1, 3, 0},
        {"f", 3, 7, 0}, {"g", 1, 4, 0}, {"h", 6, 4, 0}, {"i", 2, 2, 0}, {"j", 3, 6, 0}};
    REQUIRE(compute_bounds(mods, 11).lower < compute_bounds(mods, 11).upper);
    try {
        min_strip_width(mods, 11, {2, 60.0});
        FAIL("expected StripBudgetError");
    } catch (const StripBudgetError& e) {
        CHECK(e.lower() <= e.upper());
    }
}

TEST_CASE("defragment packs the reference set back to eleven columns") {
    const Layout ref = oracles::reference_layout_113();
    const auto d = defragment(ref);
    CHECK(d.strip.optimal_width == 11);
    CHECK(d.after.free_cols.count == 2);
    CHECK(d.after.free_cols.columns == std::vector<int>{11, 12});
    // at least the two-column full-height block; the witness refinement may
    // attach further slack to it
    CHECK(d.after.max_free_rect.area() >= 2ll * 11);
    CHECK(d.before.free_area == 30);
    CHECK(d.after.free_area == 30);
    CHECK(validate_layout(d.layout).empty());
}

TEST_CASE("defragment reaches nine columns once the low-usage pair leaves") {
    Layout l = oracles::reference_layout_113();
    std::erase_if(l.placements, [](const Placement& p) {
        return p.module_id == "M10" || p.module_id == "M11";
    });
    l.modules.erase("M10");
    l.modules.erase("M11");
    const auto d = defragment(l);
    CHECK(d.before.free_area == 52);
    CHECK(d.strip.optimal_width == 9);
    CHECK(d.after.free_cols.count == 4);
    CHECK(d.after.max_free_rect.area() >= 4ll * 11);
}

TEST_CASE("defragment is idempotent on width") {
    const auto first = defragment(oracles::reference_layout_113());
    const auto second = defragment(first.layout);
    CHECK(second.strip.optimal_width == first.strip.optimal_width);
    CHECK(second.after.free_cols.count == first.after.free_cols.count);
}

TEST_CASE("defragment preserves the module multiset") {
    SplitMix64 rng(79);
    for (int t = 0; t < 40; ++t) {
        const Layout l = oracles::random_layout(rng, 10, 8, 5);
        const auto d = defragment(l);
        std::map<std::string, ModuleSpec> before, after;
        for (const auto& p : l.placements) before[p.module_id] = *l.find_module(p.module_id);
        for (const auto& p : d.layout.placements)
            after[p.module_id] = *d.layout.find_module(p.module_id);
        CHECK(before == after);
        CHECK(validate_layout(d.layout).empty());
    }
}

TEST_CASE("compact_layout slides modules left and down without breaking anything") {
    SplitMix64 rng(87);
    for (int t = 0; t < 60; ++t) {
        const Layout l = oracles::random_layout(rng, rng.range(3, 12), rng.range(3, 10), 5);
        const Layout c = compact_layout(l);
        CHECK(validate_layout(c).empty());
        CHECK(layout_width(c) <= layout_width(l));
        CHECK(c.modules == l.modules);
        CHECK(compact_layout(c) == c);  // fixpoint
        // nothing can slide further
        const auto grid = packclass::detail::occupancy_grid(c);
        for (const auto& p : c.placements) {
            const ModuleSpec& m = *c.find_module(p.module_id);
            if (p.x > 0) {
                bool blocked = false;
                for (int y = p.y; y < p.y + m.height && !blocked; ++y)
                    blocked = grid[static_cast<std::size_t>(y) * c.container.width + p.x - 1];
                CHECK(blocked);
            }
            if (p.y > 0) {
                bool blocked = false;
                for (int x = p.x; x < p.x + m.width && !blocked; ++x)
                    blocked = grid[static_cast<std::size_t>(p.y - 1) * c.container.width + x];
                CHECK(blocked);
            }
        }
    }
}

TEST_CASE("defragment never loses free columns") {
    SplitMix64 rng(83);
    for (int t = 0; t < 40; ++t) {
        const Layout l = oracles::random_layout(rng, 13, 11, 6);
        const auto d = defragment(l);
        CHECK(d.after.free_cols.count >= d.before.free_cols.count);
        CHECK(d.after.free_cols.count == l.container.width - d.strip.optimal_width);
    }
}
