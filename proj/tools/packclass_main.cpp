// packclass: exact strip packing and layout defragmentation for
// column-reconfigurable devices.
//
// Subcommands: solve-opp, defrag, simulate, render, bounds.
// Exit codes: 0 success/feasible, 1 infeasible, 2 budget exhausted,
// 64 input error, 70 internal error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "packclass/bounds.hpp"
#include "packclass/harness.hpp"
#include "packclass/io.hpp"
#include "packclass/opp.hpp"
#include "packclass/strip.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kInfeasible = 1;
constexpr int kUnknown = 2;
constexpr int kInputError = 64;
constexpr int kInternalError = 70;

int log_level() {
    const char* env = std::getenv("PACKCLASS_LOG");
    return env ? std::atoi(env) : 0;
}

void log_info(const std::string& msg) {
    if (log_level() >= 1) std::cerr << "[packclass] " << msg << "\n";
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw packclass::ParseError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// All file outputs go through a temp-and-rename so failures never leave a
// partial file behind.
void atomic_write(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write '" + tmp + "'");
        out << content;
        if (!out) throw std::runtime_error("short write to '" + tmp + "'");
    }
    std::filesystem::rename(tmp, path);
}

std::string dump(const packclass::Json& j) { return j.dump(2) + "\n"; }

packclass::Layout load_layout(const std::string& path, bool must_be_valid) {
    const auto j = packclass::parse_json_text(read_file(path));
    packclass::Layout l = packclass::layout_from_json(j);
    if (must_be_valid) {
        const auto violations = packclass::validate_layout(l);
        if (!violations.empty())
            throw packclass::ParseError(path + ": " + violations.front().message);
    }
    return l;
}

std::vector<packclass::ModuleSpec> module_list(const packclass::Layout& l) {
    std::vector<packclass::ModuleSpec> mods;
    mods.reserve(l.modules.size());
    for (const auto& [id, m] : l.modules) mods.push_back(m);
    return mods;
}

std::string metrics_line(const packclass::MetricsReport& m) {
    return "free space " + std::to_string(m.free_area) + ", max rectangle " +
           packclass::format_rect(m.max_free_rect) + ", free columns " +
           std::to_string(m.free_cols.count);
}

struct CommonFlags {
    std::string out;
    std::string svg;
    long long node_budget = 10'000'000;
    double time_budget = 60.0;
    bool quiet = false;

    packclass::SolveLimits limits() const { return {node_budget, time_budget}; }
};

int cmd_solve_opp(const std::string& input, const CommonFlags& flags) {
    const packclass::Layout inst = load_layout(input, false);
    const auto mods = module_list(inst);
    log_info("solve-opp: " + std::to_string(mods.size()) + " modules in " +
             std::to_string(inst.container.width) + "x" + std::to_string(inst.container.height));

    const auto r = packclass::solve_opp(mods, inst.container, flags.limits());

    packclass::Json j;
    j["verdict"] = packclass::to_string(r.verdict);
    j["container"] = {{"width", inst.container.width}, {"height", inst.container.height}};
    j["stats"] = packclass::stats_to_json(r.stats);
    if (r.layout) j["layout"] = packclass::layout_to_json(*r.layout);
    if (!flags.out.empty()) atomic_write(flags.out, dump(j));

    if (!flags.quiet) {
        std::cout << packclass::to_string(r.verdict) << " (nodes " << r.stats.nodes
                  << ", conflicts " << r.stats.conflicts << ")\n";
        if (r.layout)
            for (const auto& p : r.layout->placements)
                std::cout << "  " << p.module_id << " at (" << p.x << "," << p.y << ")\n";
    }

    switch (r.verdict) {
        case packclass::OppVerdict::Feasible: return kOk;
        case packclass::OppVerdict::Infeasible: return kInfeasible;
        default: return kUnknown;
    }
}

int cmd_defrag(const std::string& input, const CommonFlags& flags, int usage_threshold) {
    packclass::Layout layout = load_layout(input, true);

    std::vector<std::string> removed;
    if (usage_threshold > 0) {
        auto r = packclass::remove_low_usage(layout, usage_threshold);
        layout = std::move(r.layout);
        removed = std::move(r.removed);
        log_info("removed " + std::to_string(removed.size()) + " low-usage modules");
    }

    const auto d = packclass::defragment(layout, flags.limits());
    for (const auto& p : d.strip.probes)
        log_info("probe W=" + std::to_string(p.width) + " -> " +
                 packclass::to_string(p.verdict) + " (" + std::to_string(p.stats.nodes) +
                 " nodes)");

    packclass::Json j;
    j["optimal_width"] = d.strip.optimal_width;
    j["removed"] = removed;
    j["before"] = packclass::metrics_to_json(d.before);
    j["after"] = packclass::metrics_to_json(d.after);
    j["probes"] = packclass::probes_to_json(d.strip.probes);
    j["layout"] = packclass::layout_to_json(d.layout);
    if (!flags.out.empty()) atomic_write(flags.out, dump(j));

    if (!flags.svg.empty()) {
        const std::filesystem::path base(flags.svg);
        const auto stem = (base.parent_path() / base.stem()).string();
        atomic_write(stem + ".before.svg", packclass::render_svg(layout));
        atomic_write(stem + ".after.svg", packclass::render_svg(d.layout));
    }

    if (!flags.quiet) {
        std::cout << "modules " << d.layout.placements.size() << ", optimal width "
                  << d.strip.optimal_width << " (" << d.strip.probes.size() << " probes)\n";
        std::cout << "before: " << metrics_line(d.before) << "\n";
        std::cout << "after:  " << metrics_line(d.after) << "\n";
    }
    return kOk;
}

int cmd_simulate(const std::string& input, const CommonFlags& flags,
                 std::optional<std::uint64_t> seed_flag, int usage_threshold) {
    const auto file = packclass::scenario_from_json(packclass::parse_json_text(read_file(input)));

    std::vector<packclass::ScenarioEvent> events;
    if (file.events) {
        events = *file.events;
    } else {
        const auto seed = seed_flag ? seed_flag : file.seed;
        if (!seed)
            throw packclass::ParseError(input + ": scenario has no events and no seed");
        packclass::ScenarioParams params;
        params.container = file.container;
        if (usage_threshold >= 0) params.low_usage_threshold = usage_threshold;
        events = packclass::generate_scenario(*seed, params).events;
        log_info("generated " + std::to_string(events.size()) + " events from seed " +
                 std::to_string(*seed));
    }

    const packclass::Layout initial{file.container, {}, {}};
    const auto rep = packclass::run_scenario(initial, events, flags.limits());

    if (!flags.out.empty()) atomic_write(flags.out, dump(packclass::report_to_json(rep)));
    if (!flags.quiet) {
        const std::string label = std::filesystem::path(input).stem().string();
        std::cout << packclass::report_table(rep, label);
    }
    return kOk;
}

int cmd_render(const std::string& input, const CommonFlags& flags) {
    const packclass::Layout layout = load_layout(input, true);
    const std::string svg = packclass::render_svg(layout);
    if (!flags.out.empty())
        atomic_write(flags.out, svg);
    else
        std::cout << svg;
    return kOk;
}

int cmd_bounds(const std::string& input, const CommonFlags& flags) {
    const packclass::Layout inst = load_layout(input, false);
    const auto mods = module_list(inst);
    const auto b = packclass::compute_bounds(mods, inst.container.height);

    packclass::Json j;
    j["lower"] = b.lower;
    j["upper"] = b.upper;
    j["upper_layout"] = packclass::layout_to_json(b.upper_layout);
    if (!flags.out.empty()) atomic_write(flags.out, dump(j));
    if (!flags.quiet) std::cout << "lower " << b.lower << ", upper " << b.upper << "\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact strip packing and layout defragmentation for column-reconfigurable FPGAs"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::string input;
    int usage_threshold = -1;
    std::optional<std::uint64_t> seed_flag;

    auto add_common = [&](CLI::App* cmd, bool with_budgets) {
        cmd->add_option("input", input, "input JSON file")->required();
        cmd->add_option("--out", flags.out, "write the JSON result to this path");
        cmd->add_flag("--quiet", flags.quiet, "suppress the human-readable summary");
        if (with_budgets) {
            cmd->add_option("--node-budget", flags.node_budget,
                            "search nodes per feasibility probe");
            cmd->add_option("--time-budget", flags.time_budget,
                            "seconds per feasibility probe");
        }
    };

    auto* solve = app.add_subcommand("solve-opp", "decide whether the modules fit the container");
    add_common(solve, true);

    auto* defrag = app.add_subcommand("defrag", "re-pack a layout into the fewest columns");
    add_common(defrag, true);
    defrag->add_option("--svg", flags.svg, "write before/after SVG renderings (base path)");
    defrag->add_option("--usage-threshold", usage_threshold,
                       "drop modules with usage below this before re-packing");

    auto* simulate = app.add_subcommand("simulate", "run a scenario and print the metrics table");
    add_common(simulate, true);
    std::uint64_t seed_value = 0;
    auto* seed_opt = simulate->add_option("--seed", seed_value,
                                          "generate events from this seed when the file has none");
    simulate->add_option("--usage-threshold", usage_threshold,
                         "low-usage threshold for generated scenarios");

    auto* render = app.add_subcommand("render", "draw a layout as SVG");
    add_common(render, false);

    auto* bounds = app.add_subcommand("bounds", "print the column-count bounds for an instance");
    add_common(bounds, false);

    CLI11_PARSE(app, argc, argv);
    if (*seed_opt) seed_flag = seed_value;

    try {
        if (solve->parsed()) return cmd_solve_opp(input, flags);
        if (defrag->parsed()) return cmd_defrag(input, flags, usage_threshold);
        if (simulate->parsed()) return cmd_simulate(input, flags, seed_flag, usage_threshold);
        if (render->parsed()) return cmd_render(input, flags);
        if (bounds->parsed()) return cmd_bounds(input, flags);
    } catch (const packclass::ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInputError;
    } catch (const packclass::StripBudgetError& e) {
        std::cerr << "budget exhausted: " << e.what() << "\n";
        return kUnknown;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternalError;
    }
    return kInternalError;
}
