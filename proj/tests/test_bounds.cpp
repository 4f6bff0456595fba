#include <doctest.h>

#include "packclass/bounds.hpp"
#include "packclass/rng.hpp"
#include "oracles.hpp"

using namespace packclass;

namespace {

const std::vector<ModuleSpec> kFourModuleSet{
    {"a", 3, 4, 0}, {"b", 2, 2, 0}, {"c", 2, 2, 0}, {"d", 1, 3, 0}};

std::vector<ModuleSpec> random_instance(SplitMix64& rng, int max_modules, int height) {
    const int n = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_modules)));
    std::vector<ModuleSpec> mods;
    for (int i = 0; i < n; ++i)
        mods.push_back({"r" + std::to_string(i), rng.range(1, 4), rng.range(1, height), 0});
    return mods;
}

}  // namespace

TEST_CASE("volume_lower_bound is the ceiling of area over height") {
    CHECK(volume_lower_bound(oracles::reference_modules_113(), 11) == 11);
    CHECK(volume_lower_bound({}, 7) == 0);
    CHECK(volume_lower_bound({{"a", 3, 5, 0}}, 11) == 2);
    CHECK_THROWS_AS(volume_lower_bound({}, 0), std::invalid_argument);
}

TEST_CASE("shelf_pack reaches width six on the four-module example") {
    for (const auto strategy :
         {ShelfStrategy::NextFit, ShelfStrategy::FirstFit, ShelfStrategy::BestFit}) {
        const Layout l = shelf_pack(kFourModuleSet, 4, strategy);
        CHECK(validate_layout(l).empty());
        CHECK(layout_width(l) == 6);  // shelves of widths 3, 2, 1
    }
}

TEST_CASE("shelf_pack places a single module at the origin") {
    const Layout l = shelf_pack({{"solo", 4, 3, 0}}, 5, ShelfStrategy::FirstFit);
    CHECK(l.placements == std::vector<Placement>{{"solo", 0, 0}});
    CHECK(layout_width(l) == 4);
}

TEST_CASE("shelf_pack rejects modules taller than the strip") {
    CHECK_THROWS_AS(shelf_pack({{"a", 2, 5, 0}}, 4, ShelfStrategy::NextFit),
                    std::invalid_argument);
}

TEST_CASE("first-fit and best-fit never lose to next-fit") {
    SplitMix64 rng(53);
    for (int t = 0; t < 300; ++t) {
        const int H = rng.range(2, 8);
        const auto mods = random_instance(rng, 8, H);
        const int nf = layout_width(shelf_pack(mods, H, ShelfStrategy::NextFit));
        const int ff = layout_width(shelf_pack(mods, H, ShelfStrategy::FirstFit));
        const int bf = layout_width(shelf_pack(mods, H, ShelfStrategy::BestFit));
        CHECK(ff <= nf);
        CHECK(bf <= nf);
    }
}

TEST_CASE("shelf layouts are always valid and deterministic") {
    SplitMix64 rng(59);
    for (int t = 0; t < 100; ++t) {
        const int H = rng.range(2, 8);
        const auto mods = random_instance(rng, 8, H);
        for (const auto strategy :
             {ShelfStrategy::NextFit, ShelfStrategy::FirstFit, ShelfStrategy::BestFit}) {
            const Layout a = shelf_pack(mods, H, strategy);
            const Layout b = shelf_pack(mods, H, strategy);
            CHECK(validate_layout(a).empty());
            CHECK(a == b);
        }
    }
}

TEST_CASE("compute_bounds is tight on the four-module example") {
    const Bounds b = compute_bounds(kFourModuleSet, 4);
    CHECK(b.lower == 6);  // ceil(23/4)
    CHECK(b.upper == 6);
    CHECK(layout_width(b.upper_layout) == 6);
    CHECK(validate_layout(b.upper_layout).empty());
}

TEST_CASE("compute_bounds of nothing is zero") {
    const Bounds b = compute_bounds({}, 9);
    CHECK(b.lower == 0);
    CHECK(b.upper == 0);
    CHECK(b.upper_layout.placements.empty());
    CHECK(validate_layout(b.upper_layout).empty());
}

TEST_CASE("bounds sandwich the exact optimum") {
    SplitMix64 rng(61);
    for (int t = 0; t < 120; ++t) {
        const int H = rng.range(2, 6);
        const auto mods = random_instance(rng, 4, H);
        const Bounds b = compute_bounds(mods, H);
        const int exact = oracles::min_width_scan(mods, H);
        CHECK(b.lower <= exact);
        CHECK(exact <= b.upper);
        CHECK(layout_width(b.upper_layout) == b.upper);
        CHECK(validate_layout(b.upper_layout).empty());
    }
}
