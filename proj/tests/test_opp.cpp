#include <doctest.h>

#include <set>

#include "packclass/opp.hpp"
#include "packclass/rng.hpp"
#include "oracles.hpp"

using namespace packclass;

namespace {

std::vector<ModuleSpec> random_instance(SplitMix64& rng, int max_modules, int max_extent) {
    const int n = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_modules)));
    std::vector<ModuleSpec> mods;
    for (int i = 0; i < n; ++i)
        mods.push_back({"r" + std::to_string(i), rng.range(1, max_extent),
                        rng.range(1, max_extent), 0});
    return mods;
}

}  // namespace

TEST_CASE("an exact fit is feasible at the origin") {
    const auto r = solve_opp({{"A", 2, 3, 0}}, {2, 3});
    REQUIRE(r.verdict == OppVerdict::Feasible);
    REQUIRE(r.layout.has_value());
    CHECK(r.layout->placements == std::vector<Placement>{{"A", 0, 0}});
    CHECK(r.stats.nodes >= 1);
}

TEST_CASE("a module wider than the container fails the precheck") {
    const auto r = solve_opp({{"A", 4, 1, 0}}, {3, 3});
    CHECK(r.verdict == OppVerdict::Infeasible);
    CHECK(r.stats.nodes == 1);
}

TEST_CASE("two 2x2 modules cannot share a 3x3 box") {
    const std::vector<ModuleSpec> mods{{"a", 2, 2, 0}, {"b", 2, 2, 0}};
    const auto r = solve_opp(mods, {3, 3});
    CHECK(r.verdict == OppVerdict::Infeasible);
    CHECK(!brute_force_opp(mods, {3, 3}).feasible);
}

TEST_CASE("the empty instance is trivially feasible") {
    const auto r = solve_opp({}, {4, 4});
    REQUIRE(r.verdict == OppVerdict::Feasible);
    CHECK(r.layout->placements.empty());
}

TEST_CASE("a unit module fills a unit box") {
    const auto r = solve_opp({{"dot", 1, 1, 0}}, {1, 1});
    CHECK(r.verdict == OppVerdict::Feasible);
    CHECK(brute_force_opp({{"dot", 1, 1, 0}}, {1, 1}).feasible);
}

TEST_CASE("solver verdicts match placement enumeration") {
    SplitMix64 rng(41);
    for (int t = 0; t < 400; ++t) {
        const auto mods = random_instance(rng, 5, 4);
        const Container box{rng.range(1, 6), rng.range(1, 6)};
        const auto mine = solve_opp(mods, box);
        REQUIRE(mine.verdict != OppVerdict::Unknown);
        const auto ref = brute_force_opp(mods, box);
        CHECK(mine.feasible() == ref.feasible);
        if (mine.feasible()) {
            CHECK(validate_layout(*mine.layout).empty());
            std::multiset<std::string> placed, given;
            for (const auto& p : mine.layout->placements) placed.insert(p.module_id);
            for (const auto& m : mods) given.insert(m.id);
            CHECK(placed == given);
        }
    }
}

TEST_CASE("feasible results carry a packing class that extracts cleanly") {
    SplitMix64 rng(43);
    for (int t = 0; t < 100; ++t) {
        const auto mods = random_instance(rng, 5, 4);
        const Container box{rng.range(2, 6), rng.range(2, 6)};
        const auto r = solve_opp(mods, box);
        if (!r.feasible()) continue;
        REQUIRE(r.packing_class.has_value());
        CHECK(check_conditions(*r.packing_class).all_ok());
        const Layout ex = extract_layout(*r.packing_class, r.class_modules, box);
        CHECK(validate_layout(ex).empty());
    }
}

TEST_CASE("identical runs report identical statistics") {
    const std::vector<ModuleSpec> mods{
        {"a", 3, 2, 0}, {"b", 2, 3, 0}, {"c", 2, 2, 0}, {"d", 1, 4, 0}};
    const auto r1 = solve_opp(mods, {5, 5});
    const auto r2 = solve_opp(mods, {5, 5});
    CHECK(r1.verdict == r2.verdict);
    CHECK(r1.stats.nodes == r2.stats.nodes);
    CHECK(r1.stats.conflicts == r2.stats.conflicts);
    CHECK(r1.stats.propagated_fixes == r2.stats.propagated_fixes);
    if (r1.feasible()) CHECK(r1.layout->placements == r2.layout->placements);
}

TEST_CASE("widening the container preserves feasibility") {
    SplitMix64 rng(47);
    for (int t = 0; t < 120; ++t) {
        const auto mods = random_instance(rng, 4, 4);
        const Container box{rng.range(1, 6), rng.range(1, 6)};
        if (!solve_opp(mods, box).feasible()) continue;
        CHECK(solve_opp(mods, {box.width + 1, box.height}).feasible());
    }
}

TEST_CASE("a starved node budget yields Unknown") {
    std::vector<ModuleSpec> mods;
    for (int i = 0; i < 9; ++i)
        mods.push_back({"m" + std::to_string(i), 1 + i % 3, 1 + (i * 2) % 4, 0});
    const auto r = solve_opp(mods, {7, 7}, {3, 60.0});
    CHECK(r.verdict == OppVerdict::Unknown);
}

TEST_CASE("duplicate ids are rejected") {
    CHECK_THROWS_AS(solve_opp({{"x", 1, 1, 0}, {"x", 2, 2, 0}}, {4, 4}),
                    std::invalid_argument);
}

TEST_CASE("enumerate_opp_layouts walks distinct packing classes") {
    const std::vector<ModuleSpec> mods{{"a", 2, 1, 0}, {"b", 1, 2, 0}};
    const auto layouts = enumerate_opp_layouts(mods, {3, 3}, 8);
    CHECK(layouts.size() >= 2);
    for (std::size_t i = 0; i < layouts.size(); ++i) {
        CHECK(validate_layout(layouts[i]).empty());
        for (std::size_t j = i + 1; j < layouts.size(); ++j)
            CHECK(from_layout(layouts[i]) != from_layout(layouts[j]));
    }
    CHECK(layouts == enumerate_opp_layouts(mods, {3, 3}, 8));
    CHECK(enumerate_opp_layouts(mods, {3, 3}, 1).size() == 1);
    CHECK(enumerate_opp_layouts({{"big", 5, 5, 0}}, {3, 3}, 4).empty());
    const auto empty = enumerate_opp_layouts({}, {3, 3}, 4);
    REQUIRE(empty.size() == 1);
    CHECK(empty[0].placements.empty());
}

TEST_CASE("brute_force_opp refuses oversized search spaces") {
    std::vector<ModuleSpec> mods;
    for (int i = 0; i < 12; ++i) mods.push_back({"m" + std::to_string(i), 1, 1, 0});
    CHECK_THROWS_AS(brute_force_opp(mods, {30, 30}, 1e6), std::runtime_error);
}

TEST_CASE("brute_force_opp handles the degenerate cases") {
    CHECK(brute_force_opp({}, {3, 3}).feasible);
    const auto r = brute_force_opp({{"a", 2, 2, 0}}, {2, 2});
    REQUIRE(r.feasible);
    CHECK(validate_layout(*r.layout).empty());
}
