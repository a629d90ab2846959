// Command-line front end: thresholds, dispersion, landau, region-map,
// simulate, bifurcate. Exit codes: 0 success, 2 config error, 3 numerical
// failure.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mspattern/commands.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir = "out";
    std::string seed_list;
    std::vector<std::string> overrides;
};

void add_common(CLI::App* sub, CommonArgs& args) {
    sub->add_option("--config", args.config_path, "Config file (key = value sections)");
    sub->add_option("--out", args.out_dir, "Output directory");
    sub->add_option("--seed", args.seed_list, "Comma-separated seed list (overrides sim.seeds)");
    sub->add_option("--override", args.overrides, "Override as section.key=value")
        ->take_all();
}

mspattern::RunConfig load_config(const CommonArgs& args) {
    mspattern::RunConfig cfg;
    if (!args.config_path.empty()) cfg = mspattern::parse_config_file(args.config_path);
    for (const auto& ov : args.overrides) mspattern::apply_override(cfg, ov);
    if (!args.seed_list.empty())
        cfg.sim.seeds = mspattern::detail::parse_list<std::uint64_t>(args.seed_list, "--seed");
    cfg.validate();
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Chemotaxis reaction-diffusion pattern toolkit: Turing thresholds, "
                 "Stuart-Landau analysis, 1D simulation and bifurcation continuation"};
    app.require_subcommand(1);

    CommonArgs args;
    using Handler = int (*)(const mspattern::RunConfig&, const std::filesystem::path&);
    struct SubSpec {
        const char* name;
        const char* help;
        Handler fn;
    };
    const SubSpec subs[] = {
        {"thresholds", "Turing thresholds and per-mode bifurcation values", mspattern::cmd_thresholds},
        {"dispersion", "Sampled dispersion relation", mspattern::cmd_dispersion},
        {"landau", "Stuart-Landau coefficients and criticality", mspattern::cmd_landau},
        {"region-map", "Criticality map over the (M, eps)-plane", mspattern::cmd_region_map},
        {"simulate", "Time integration to steady state over a seed list", mspattern::cmd_simulate},
        {"bifurcate", "Steady-state bifurcation diagram by arclength continuation", mspattern::cmd_bifurcate},
    };
    for (const auto& s : subs) add_common(app.add_subcommand(s.name, s.help), args);

    CLI11_PARSE(app, argc, argv);

    const CLI::App* chosen = app.get_subcommands().front();
    try {
        const mspattern::RunConfig cfg = load_config(args);
        for (const auto& s : subs)
            if (chosen->get_name() == s.name) return s.fn(cfg, args.out_dir);
        std::fprintf(stderr, "unknown subcommand\n");
        return 2;
    } catch (const mspattern::InvalidParameter& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const mspattern::DegenerateCoupling& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const mspattern::BelowCritical& e) {
        std::fprintf(stderr, "config error: %s (chi_c = %.17g)\n", e.what(), e.chi_c);
        return 2;
    } catch (const mspattern::BlowUp& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    }
}
