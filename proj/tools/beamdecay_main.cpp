// beamdecay <certify|table1|simulate|sweep|check> --config <path> [--out <dir>]
//           [--set key=value ...] [--seed N] [--workers N]

#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
    using beamdecay::cli::RunManifest;

    CLI::App app{"Exponential energy decay certificates and simulations for a beam with "
                 "boundary springs and dampers"};
    app.require_subcommand(1, 1);

    RunManifest manifest;
    std::string config;
    std::uint64_t seed = 0;
    int workers = 0;

    for (const char* name : {"certify", "table1", "simulate", "sweep", "check"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config,-c", config, "JSON configuration file")->check(CLI::ExistingFile);
        sub->add_option("--out,-o", manifest.output_dir, "Output directory (BEAMDECAY_OUT overrides)")
            ->capture_default_str();
        sub->add_option("--set", manifest.overrides, "Override a config key: key=value")
            ->allow_extra_args(false);
        sub->add_option("--seed", seed, "Property-suite seed");
        sub->add_option("--workers", workers, "Sweep worker threads")->check(CLI::PositiveNumber);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : beamdecay::cli::kExitConfig;
    }

    auto* sub = app.get_subcommands().front();
    manifest.command = sub->get_name();
    if (!config.empty()) manifest.config_path = config;
    if (sub->count("--seed")) manifest.seed = seed;
    if (sub->count("--workers")) manifest.workers = workers;
    return beamdecay::cli::run(manifest, std::cout, std::cerr);
}
