#include <doctest.h>

#include "packclass/geometry.hpp"
#include "packclass/rng.hpp"
#include "oracles.hpp"

using namespace packclass;

namespace {

Layout device_13x11() {
    Layout l;
    l.container = {13, 11};
    return l;
}

Layout fig2_layout(int m5_y) {
    Layout l = device_13x11();
    l.modules["M4"] = {"M4", 5, 4, 3};
    l.modules["M5"] = {"M5", 5, 4, 2};
    l.placements = {{"M4", 3, 1}, {"M5", 5, m5_y}};
    return l;
}

}  // namespace

TEST_CASE("validate_layout accepts the empty layout") {
    CHECK(validate_layout(device_13x11()).empty());
}

TEST_CASE("validate_layout accepts touching y-ranges") {
    // M4 at (3,1) and M5 at (5,6): rows [1,5) and [6,10) are disjoint
    CHECK(validate_layout(fig2_layout(6)).empty());
}

TEST_CASE("validate_layout reports an overlap") {
    // moving M5 to (5,3) intersects [3,8)x[1,5) with [5,10)x[3,7)
    const auto v = validate_layout(fig2_layout(3));
    REQUIRE(v.size() == 1);
    CHECK(v[0].kind == Violation::Kind::Overlap);
    CHECK(v[0].a == "M4");
    CHECK(v[0].b == "M5");
}

TEST_CASE("validate_layout flags unknown ids, duplicates and out-of-bounds") {
    Layout l = device_13x11();
    l.modules["A"] = {"A", 3, 3, 0};
    l.placements = {{"A", 0, 0}, {"A", 5, 5}, {"B", 1, 1}, {"A", 11, 9}};
    const auto v = validate_layout(l);
    bool dup = false, unknown = false, oob = false;
    for (const auto& viol : v) {
        dup |= viol.kind == Violation::Kind::DuplicatePlacement;
        unknown |= viol.kind == Violation::Kind::UnknownModule;
        oob |= viol.kind == Violation::Kind::OutOfBounds;
    }
    CHECK(dup);
    CHECK(unknown);
    CHECK(oob);
}

TEST_CASE("validate_layout agrees with the occupancy-grid oracle") {
    SplitMix64 rng(11);
    int checked = 0;
    for (int t = 0; t < 300; ++t) {
        Layout l;
        l.container = {rng.range(1, 10), rng.range(1, 10)};
        const int k = rng.range(0, 4);
        for (int i = 0; i < k; ++i) {
            const std::string id = "m" + std::to_string(i);
            l.modules[id] = {id, rng.range(1, 5), rng.range(1, 5), 0};
            l.placements.push_back({id, rng.range(0, 8), rng.range(0, 8)});
        }
        CHECK(validate_layout(l).empty() == oracles::grid_layout_valid(l));
        ++checked;
    }
    CHECK(checked == 300);
}

TEST_CASE("free_columns on empty and full layouts") {
    Layout l = device_13x11();
    auto fc = free_columns(l);
    CHECK(fc.count == 13);
    CHECK(fc.columns.front() == 0);
    CHECK(fc.columns.back() == 12);

    l.modules["bar"] = {"bar", 13, 1, 0};
    l.placements = {{"bar", 0, 0}};
    fc = free_columns(l);
    CHECK(fc.count == 0);
    CHECK(fc.columns.empty());
}

TEST_CASE("free_columns counts only untouched columns") {
    // occupy columns [0,11) with two stacked slabs
    Layout l = device_13x11();
    l.modules["a"] = {"a", 11, 5, 0};
    l.modules["b"] = {"b", 11, 6, 0};
    l.placements = {{"a", 0, 0}, {"b", 0, 5}};
    const auto fc = free_columns(l);
    CHECK(fc.count == 2);
    CHECK(fc.columns == std::vector<int>{11, 12});
}

TEST_CASE("max_free_rectangle of an empty device is the device") {
    CHECK(max_free_rectangle(device_13x11()) == FreeRect{13, 11, 0, 0});
}

TEST_CASE("max_free_rectangle finds the free column block") {
    Layout l = device_13x11();
    l.modules["a"] = {"a", 11, 5, 0};
    l.modules["b"] = {"b", 11, 6, 0};
    l.placements = {{"a", 0, 0}, {"b", 0, 5}};
    CHECK(max_free_rectangle(l) == FreeRect{2, 11, 11, 0});
}

TEST_CASE("max_free_rectangle of a fully occupied layout is zero") {
    Layout l;
    l.container = {4, 4};
    l.modules["a"] = {"a", 4, 4, 0};
    l.placements = {{"a", 0, 0}};
    CHECK(max_free_rectangle(l) == FreeRect{0, 0, 0, 0});
}

TEST_CASE("max_free_rectangle matches exhaustive enumeration") {
    SplitMix64 rng(23);
    for (int t = 0; t < 500; ++t) {
        const int W = rng.range(1, 16);
        const int H = rng.range(1, 16);
        const Layout l = oracles::random_layout(rng, W, H, 6);
        const FreeRect mine = max_free_rectangle(l);
        const FreeRect ref = oracles::max_free_rect_exhaustive(l);
        CHECK(mine == ref);
    }
}

TEST_CASE("column_interference reproduces the three-column overlap") {
    const Layout l = fig2_layout(6);
    const auto rep = column_interference(l, 5, 5, 1);
    CHECK(rep.interruption.at("M4") == 3);
    CHECK(rep.interrupted_modules == 2);  // M5 itself sits in the window
}

TEST_CASE("column_interference with a disjoint window is all zeros") {
    const Layout l = fig2_layout(6);
    const auto rep = column_interference(l, 11, 2, 1);
    CHECK(rep.interrupted_modules == 0);
    CHECK(rep.interruption.at("M4") == 0);
    CHECK(rep.interruption.at("M5") == 0);
    CHECK(rep.total() == 0);
}

TEST_CASE("column_interference scales with the per-column time") {
    Layout l = device_13x11();
    l.modules["M4"] = {"M4", 5, 4, 3};
    l.placements = {{"M4", 3, 1}};
    const auto rep = column_interference(l, 3, 5, 2);
    CHECK(rep.interruption.at("M4") == 10);  // 5 shared columns, c = 2
}

TEST_CASE("column_interference rejects windows outside the device") {
    const Layout l = device_13x11();
    CHECK_THROWS_AS(column_interference(l, 10, 5, 1), std::invalid_argument);
}

TEST_CASE("column_interference is monotone in the window") {
    SplitMix64 rng(31);
    for (int t = 0; t < 100; ++t) {
        const Layout l = oracles::random_layout(rng, 13, 11, 5);
        const int w = rng.range(1, 6);
        const int x = rng.range(0, 13 - w - 1);
        const auto narrow = column_interference(l, x, w, 1);
        const auto wide = column_interference(l, x, w + 1, 1);
        for (const auto& [id, t_narrow] : narrow.interruption)
            CHECK(wide.interruption.at(id) >= t_narrow);
    }
}

TEST_CASE("free_area matches the device-minus-modules count") {
    CHECK(free_area(device_13x11()) == 143);

    const Layout ref = oracles::reference_layout_113();
    REQUIRE(validate_layout(ref).empty());
    CHECK(free_area(ref) == 30);

    Layout removed = ref;
    std::erase_if(removed.placements, [](const Placement& p) {
        return p.module_id == "M10" || p.module_id == "M11";
    });
    CHECK(free_area(removed) == 52);
}

TEST_CASE("contiguous free columns bound the max rectangle from below") {
    SplitMix64 rng(47);
    for (int t = 0; t < 200; ++t) {
        const Layout l = oracles::random_layout(rng, rng.range(2, 13), rng.range(2, 11), 5);
        const auto fc = free_columns(l);
        int run = 0, best_run = 0;
        for (int c = 0, i = 0; c < l.container.width; ++c) {
            if (i < static_cast<int>(fc.columns.size()) && fc.columns[i] == c) {
                ++run;
                ++i;
            } else {
                run = 0;
            }
            best_run = std::max(best_run, run);
        }
        CHECK(fc.count <= l.container.width);
        CHECK(max_free_rectangle(l).area() >=
              static_cast<long long>(best_run) * l.container.height);
    }
}
