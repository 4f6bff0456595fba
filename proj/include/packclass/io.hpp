#ifndef PACKCLASS_IO_HPP
#define PACKCLASS_IO_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "packclass/geometry.hpp"
#include "packclass/harness.hpp"
#include "packclass/opp.hpp"
#include "packclass/strip.hpp"

// JSON interchange (layouts, solver instances, scenarios, reports), the
// text report table, and a static SVG rendering of layouts. All emitters
// are byte-deterministic for identical inputs.

namespace packclass {

using Json = nlohmann::ordered_json;

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline const Json& require_field(const Json& j, const char* key, const std::string& path) {
    if (!j.is_object()) throw ParseError(path + ": expected an object");
    const auto it = j.find(key);
    if (it == j.end()) throw ParseError(path + "." + key + ": missing");
    return *it;
}

inline int get_int(const Json& j, const char* key, const std::string& path) {
    const Json& f = require_field(j, key, path);
    if (!f.is_number_integer()) throw ParseError(path + "." + key + ": expected an integer");
    return f.get<int>();
}

inline std::string get_string(const Json& j, const char* key, const std::string& path) {
    const Json& f = require_field(j, key, path);
    if (!f.is_string()) throw ParseError(path + "." + key + ": expected a string");
    return f.get<std::string>();
}

inline const Json& get_array(const Json& j, const char* key, const std::string& path) {
    const Json& f = require_field(j, key, path);
    if (!f.is_array()) throw ParseError(path + "." + key + ": expected an array");
    return f;
}

}  // namespace detail

inline Json parse_json_text(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
}

// ---- layouts -------------------------------------------------------------

inline Container container_from_json(const Json& j, const std::string& path) {
    Container c;
    c.width = detail::get_int(j, "width", path);
    c.height = detail::get_int(j, "height", path);
    if (c.width < 1 || c.height < 1) throw ParseError(path + ": extents must be positive");
    return c;
}

inline ModuleSpec module_from_json(const Json& j, const std::string& path) {
    ModuleSpec m;
    m.id = detail::get_string(j, "id", path);
    m.width = detail::get_int(j, "width", path);
    m.height = detail::get_int(j, "height", path);
    m.usage_count = j.contains("usage") ? detail::get_int(j, "usage", path) : 0;
    if (m.id.empty()) throw ParseError(path + ".id: must not be empty");
    if (m.width < 1 || m.height < 1) throw ParseError(path + ": extents must be positive");
    if (m.usage_count < 0) throw ParseError(path + ".usage: must be non-negative");
    return m;
}

// Accepts solver instances as well: "placements" may be absent.
inline Layout layout_from_json(const Json& j, const std::string& path = "layout") {
    Layout l;
    l.container = container_from_json(detail::require_field(j, "container", path),
                                      path + ".container");
    const Json& mods = detail::get_array(j, "modules", path);
    for (std::size_t i = 0; i < mods.size(); ++i) {
        const std::string mp = path + ".modules[" + std::to_string(i) + "]";
        ModuleSpec m = module_from_json(mods[i], mp);
        if (l.modules.count(m.id)) throw ParseError(mp + ": duplicate module id '" + m.id + "'");
        l.modules[m.id] = std::move(m);
    }
    if (j.contains("placements")) {
        const Json& pls = detail::get_array(j, "placements", path);
        for (std::size_t i = 0; i < pls.size(); ++i) {
            const std::string pp = path + ".placements[" + std::to_string(i) + "]";
            Placement p;
            p.module_id = detail::get_string(pls[i], "id", pp);
            p.x = detail::get_int(pls[i], "x", pp);
            p.y = detail::get_int(pls[i], "y", pp);
            l.placements.push_back(std::move(p));
        }
    }
    return l;
}

inline Json layout_to_json(const Layout& layout) {
    Json j;
    j["container"] = {{"width", layout.container.width}, {"height", layout.container.height}};
    Json mods = Json::array();
    for (const auto& [id, m] : layout.modules)
        mods.push_back({{"id", id}, {"width", m.width}, {"height", m.height},
                        {"usage", m.usage_count}});
    j["modules"] = std::move(mods);
    Json pls = Json::array();
    for (const auto& p : layout.placements)
        pls.push_back({{"id", p.module_id}, {"x", p.x}, {"y", p.y}});
    j["placements"] = std::move(pls);
    return j;
}

// ---- metrics / solver output ----------------------------------------------

inline Json metrics_to_json(const MetricsReport& m) {
    Json j;
    j["free_area"] = m.free_area;
    j["max_free_rect"] = {{"width", m.max_free_rect.width},
                          {"height", m.max_free_rect.height},
                          {"x", m.max_free_rect.x},
                          {"y", m.max_free_rect.y}};
    j["free_columns"] = {{"count", m.free_cols.count}, {"columns", m.free_cols.columns}};
    return j;
}

// Wall-clock time is deliberately left out so repeated runs stay
// byte-identical.
inline Json stats_to_json(const SearchStats& s) {
    Json j;
    j["nodes"] = s.nodes;
    j["conflicts"] = s.conflicts;
    j["propagated_fixes"] = s.propagated_fixes;
    j["max_depth"] = s.max_depth;
    return j;
}

inline Json probes_to_json(const std::vector<StripProbe>& probes) {
    Json arr = Json::array();
    for (const auto& p : probes) {
        Json j;
        j["width"] = p.width;
        j["verdict"] = to_string(p.verdict);
        j["stats"] = stats_to_json(p.stats);
        arr.push_back(std::move(j));
    }
    return arr;
}

// ---- scenarios -------------------------------------------------------------

struct ScenarioFile {
    Container container{13, 11};
    std::optional<std::uint64_t> seed;
    std::optional<std::vector<ScenarioEvent>> events;  // absent: generate from seed
};

inline ScenarioFile scenario_from_json(const Json& j, const std::string& path = "scenario") {
    ScenarioFile s;
    s.container = container_from_json(detail::require_field(j, "container", path),
                                      path + ".container");
    if (j.contains("seed")) {
        const Json& f = j["seed"];
        if (!f.is_number_integer() || f.get<long long>() < 0)
            throw ParseError(path + ".seed: expected a non-negative integer");
        s.seed = f.get<std::uint64_t>();
    }
    if (!j.contains("events")) return s;

    const Json& evs = detail::get_array(j, "events", path);
    std::vector<ScenarioEvent> events;
    for (std::size_t i = 0; i < evs.size(); ++i) {
        const std::string ep = path + ".events[" + std::to_string(i) + "]";
        const std::string type = detail::get_string(evs[i], "type", ep);
        if (type == "arrive") {
            events.push_back(ScenarioEvent::arrive(
                module_from_json(detail::require_field(evs[i], "module", ep), ep + ".module")));
        } else if (type == "depart") {
            events.push_back(ScenarioEvent::depart(detail::get_string(evs[i], "id", ep)));
        } else if (type == "remove_low_usage") {
            events.push_back(
                ScenarioEvent::remove_low_usage(detail::get_int(evs[i], "threshold", ep)));
        } else if (type == "defragment") {
            events.push_back(ScenarioEvent::defragment());
        } else {
            throw ParseError(ep + ".type: unknown event type '" + type + "'");
        }
    }
    s.events = std::move(events);
    return s;
}

inline Json scenario_to_json(const Container& container,
                             const std::vector<ScenarioEvent>& events,
                             std::optional<std::uint64_t> seed = std::nullopt) {
    Json j;
    j["container"] = {{"width", container.width}, {"height", container.height}};
    if (seed) j["seed"] = *seed;
    Json evs = Json::array();
    for (const auto& e : events) {
        Json ej;
        switch (e.type) {
            case ScenarioEvent::Type::Arrive:
                ej["type"] = "arrive";
                ej["module"] = {{"id", e.module.id},
                                {"width", e.module.width},
                                {"height", e.module.height},
                                {"usage", e.module.usage_count}};
                break;
            case ScenarioEvent::Type::Depart:
                ej["type"] = "depart";
                ej["id"] = e.module_id;
                break;
            case ScenarioEvent::Type::RemoveLowUsage:
                ej["type"] = "remove_low_usage";
                ej["threshold"] = e.threshold;
                break;
            case ScenarioEvent::Type::Defragment:
                ej["type"] = "defragment";
                break;
        }
        evs.push_back(std::move(ej));
    }
    j["events"] = std::move(evs);
    return j;
}

inline std::string format_rect(const FreeRect& r) {
    return std::to_string(r.width) + "x" + std::to_string(r.height);
}

inline Json report_to_json(const ScenarioReport& rep) {
    Json j;
    Json rows = Json::array();
    for (const auto& r : rep.rows) {
        Json rj;
        rj["event_index"] = r.event_index;
        rj["placed_count"] = r.placed_count;
        rj["free_space"] = r.free_space;
        rj["before"] = {{"max_free_rect", format_rect(r.before_rect)},
                        {"free_columns", r.before_free_columns}};
        rj["after"] = {{"max_free_rect", format_rect(r.after_rect)},
                       {"free_columns", r.after_free_columns}};
        rj["optimal_width"] = r.optimal_width;
        rows.push_back(std::move(rj));
    }
    j["rows"] = std::move(rows);
    Json rejections = Json::array();
    for (const auto& r : rep.rejections)
        rejections.push_back({{"event_index", r.event_index}, {"id", r.module_id}});
    j["rejections"] = std::move(rejections);
    j["final"] = metrics_to_json(rep.final_metrics);
    j["final_layout"] = layout_to_json(rep.final_layout);
    return j;
}

// Aligned text table, one row per defragmentation; same column order as the
// JSON rows: scenario, |I|, free space, then before/after rectangle and
// free-column pairs.
inline std::string report_table(const ScenarioReport& rep, const std::string& label) {
    std::string out;
    auto pad = [](std::string s, std::size_t w) {
        while (s.size() < w) s += ' ';
        return s;
    };
    out += pad("Scenario", 12) + pad("|I|", 5) + pad("Free space", 12) +
           pad("Rect before", 13) + pad("Cols before", 13) + pad("Rect after", 12) +
           pad("Cols after", 12) + "\n";
    int n = 0;
    for (const auto& r : rep.rows) {
        ++n;
        const std::string name = rep.rows.size() == 1 ? label : label + "#" + std::to_string(n);
        out += pad(name, 12) + pad(std::to_string(r.placed_count), 5) +
               pad(std::to_string(r.free_space), 12) + pad(format_rect(r.before_rect), 13) +
               pad(std::to_string(r.before_free_columns), 13) +
               pad(format_rect(r.after_rect), 12) +
               pad(std::to_string(r.after_free_columns), 12) + "\n";
    }
    out += "final: free space " + std::to_string(rep.final_metrics.free_area) +
           ", max rectangle " + format_rect(rep.final_metrics.max_free_rect) +
           ", free columns " + std::to_string(rep.final_metrics.free_cols.count) + "\n";
    return out;
}

// ---- SVG -------------------------------------------------------------------

// Static picture of a layout: one labeled rectangle per placed module on a
// cell grid, free columns shaded. Row 0 renders at the top.
inline std::string render_svg(const Layout& layout) {
    constexpr int kCell = 40;
    constexpr int kMargin = 12;
    const int W = layout.container.width;
    const int H = layout.container.height;
    const int width_px = W * kCell + 2 * kMargin;
    const int height_px = H * kCell + 2 * kMargin;

    static constexpr const char* kPalette[] = {"#8dd3c7", "#ffffb3", "#bebada", "#fb8072",
                                               "#80b1d3", "#fdb462", "#b3de69", "#fccde5"};
    constexpr int kPaletteSize = 8;

    const auto ids = placed_ids_sorted(layout);
    auto color_of = [&](const std::string& id) {
        for (std::size_t i = 0; i < ids.size(); ++i)
            if (ids[i] == id) return kPalette[i % kPaletteSize];
        return kPalette[0];
    };

    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width_px) +
         "\" height=\"" + std::to_string(height_px) + "\" viewBox=\"0 0 " +
         std::to_string(width_px) + " " + std::to_string(height_px) + "\">\n";
    s += "  <rect x=\"0\" y=\"0\" width=\"" + std::to_string(width_px) + "\" height=\"" +
         std::to_string(height_px) + "\" fill=\"#ffffff\"/>\n";

    const auto free = free_columns(layout);
    for (const int c : free.columns)
        s += "  <rect x=\"" + std::to_string(kMargin + c * kCell) + "\" y=\"" +
             std::to_string(kMargin) + "\" width=\"" + std::to_string(kCell) + "\" height=\"" +
             std::to_string(H * kCell) + "\" fill=\"#e8f5e9\"/>\n";

    for (int x = 0; x <= W; ++x)
        s += "  <line x1=\"" + std::to_string(kMargin + x * kCell) + "\" y1=\"" +
             std::to_string(kMargin) + "\" x2=\"" + std::to_string(kMargin + x * kCell) +
             "\" y2=\"" + std::to_string(kMargin + H * kCell) +
             "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    for (int y = 0; y <= H; ++y)
        s += "  <line x1=\"" + std::to_string(kMargin) + "\" y1=\"" +
             std::to_string(kMargin + y * kCell) + "\" x2=\"" +
             std::to_string(kMargin + W * kCell) + "\" y2=\"" +
             std::to_string(kMargin + y * kCell) +
             "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";

    for (const auto& p : layout.placements) {
        const ModuleSpec& m = *layout.find_module(p.module_id);
        const int px = kMargin + p.x * kCell;
        const int py = kMargin + p.y * kCell;
        s += "  <rect x=\"" + std::to_string(px) + "\" y=\"" + std::to_string(py) +
             "\" width=\"" + std::to_string(m.width * kCell) + "\" height=\"" +
             std::to_string(m.height * kCell) + "\" fill=\"" + color_of(p.module_id) +
             "\" stroke=\"#333333\" stroke-width=\"2\"/>\n";
        s += "  <text x=\"" + std::to_string(px + m.width * kCell / 2) + "\" y=\"" +
             std::to_string(py + m.height * kCell / 2 + 5) +
             "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" +
             p.module_id + "</text>\n";
    }

    s += "  <rect x=\"" + std::to_string(kMargin) + "\" y=\"" + std::to_string(kMargin) +
         "\" width=\"" + std::to_string(W * kCell) + "\" height=\"" +
         std::to_string(H * kCell) + "\" fill=\"none\" stroke=\"#000000\" stroke-width=\"2\"/>\n";
    s += "</svg>\n";
    return s;
}

}  // namespace packclass

#endif  // PACKCLASS_IO_HPP
