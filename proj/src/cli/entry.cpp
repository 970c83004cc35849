#include <CLI11.hpp>
#include <ostream>

#include "banditnav/cli.hpp"

namespace banditnav::cli {

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"banditnav: frontier exploration with prompt-ensemble relevance maps"};
    app.require_subcommand(1);

    std::string config_path, out_dir, seeds_text, strategies_text = "ifbe2";
    int jobs = 1;
    auto* run = app.add_subcommand("run", "Run a batch of episodes");
    run->add_option("--config", config_path, "JSON run configuration")->required();
    run->add_option("--out", out_dir, "Output directory")->required();
    run->add_option("--seeds", seeds_text, "Seed range a..b, a single seed, or a comma list")->required();
    run->add_option("--strategies", strategies_text, "Comma-separated: ifbe1,ifbe2,closest,random");
    run->add_option("--jobs", jobs, "Parallel episodes");

    std::string in_path, layer_text, image_path;
    auto* render = app.add_subcommand("render", "Render a map layer to PGM/PPM");
    render->add_option("--in", in_path, "Snapshot (.gsmap) or episode record (.json)")->required();
    render->add_option("--layer", layer_text, "occupancy, relevance_mean, relevance_var or trajectory")
        ->required();
    render->add_option("--out", image_path, "Output image")->required();

    std::string report_dir;
    auto* report = app.add_subcommand("report", "Summarise episode records");
    report->add_option("--in", report_dir, "Run directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (*run) {
            RunManifest m;
            m.config_path = config_path;
            m.out_dir = out_dir;
            m.seeds = parse_seed_list(seeds_text);
            m.strategies = parse_strategy_list(strategies_text);
            m.jobs = jobs;
            cmd_run(m, out);
        } else if (*render) {
            const auto layer = parse_layer(layer_text);
            if (!layer) throw CliError(kExitUsage, "--layer: unknown layer '" + layer_text + "'");
            cmd_render(in_path, *layer, image_path);
        } else if (*report) {
            cmd_report(report_dir, out);
        }
    } catch (const CliError& e) {
        err << "error: " << e.what() << '\n';
        return e.exit_code();
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitOk;
}

}  // namespace banditnav::cli
