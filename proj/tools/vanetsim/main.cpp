#include <iostream>

#include <CLI11.hpp>

#include "cli.hpp"

namespace {

template <class F>
int guarded(F&& f)
{
    try {
        return f();
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return vanet::cli::kExitValidation;
    }
}

}  // namespace

int main(int argc, char** argv)
{
    using namespace vanet::cli;

    CLI::App app{"vanetsim: cooperative incentive simulator for vehicular ad-hoc networks"};
    app.require_subcommand(1);

    std::string scenario;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::string scheme;
    std::string seeds;
    std::string format;
    unsigned jobs = 0;

    auto* run_cmd = app.add_subcommand("run", "Run one scenario and export its summary");
    run_cmd->add_option("--scenario", scenario, "Scenario file")->required();
    run_cmd->add_option("--out", out_dir, "Output directory (default: $VANETSIM_OUT_DIR or ./vanetsim-out)");
    run_cmd->add_option("--seed", seed, "Override the scenario seed");
    run_cmd->add_option("--scheme", scheme, "Override the settlement scheme");
    run_cmd->add_option("--format", format, "Export only csv or json (default: both)");

    auto* sweep_cmd = app.add_subcommand("sweep", "Run a scenario over several seeds and schemes");
    sweep_cmd->add_option("--scenario", scenario, "Scenario file")->required();
    sweep_cmd->add_option("--out", out_dir, "Output directory");
    sweep_cmd->add_option("--seeds", seeds, "Seed list, e.g. 1-30 or 1,4,9");
    sweep_cmd->add_option("--scheme", scheme, "Comma-separated scheme list");
    sweep_cmd->add_option("--format", format, "Export only csv or json (default: both)");
    sweep_cmd->add_option("--jobs", jobs, "Concurrent runs (default: hardware concurrency)");

    auto* validate_cmd = app.add_subcommand("validate", "Check a scenario file without running it");
    validate_cmd->add_option("--scenario", scenario, "Scenario file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    const auto formats = [&]() -> std::vector<vanet::ExportFormat> {
        if (format.empty()) return {vanet::ExportFormat::Json, vanet::ExportFormat::Csv};
        return {parse_format(format)};
    };
    const std::filesystem::path out = out_dir.empty() ? default_out_dir() : std::filesystem::path(out_dir);

    if (*run_cmd) {
        return guarded([&] {
            RunOptions opts;
            opts.scenario = scenario;
            opts.out_dir = out;
            opts.seed = seed;
            if (!scheme.empty()) {
                auto parsed = vanet::parse_scheme(scheme);
                if (!parsed) throw std::invalid_argument("unknown scheme \"" + scheme + "\"");
                opts.scheme = *parsed;
            }
            opts.formats = formats();
            return cmd_run(opts, std::cout, std::cerr);
        });
    }
    if (*sweep_cmd) {
        return guarded([&] {
            SweepOptions opts;
            opts.scenario = scenario;
            opts.out_dir = out;
            if (!seeds.empty()) opts.seeds = parse_seed_list(seeds);
            if (!scheme.empty()) opts.schemes = parse_scheme_list(scheme);
            opts.formats = formats();
            opts.jobs = jobs;
            return cmd_sweep(opts, std::cout, std::cerr);
        });
    }
    return cmd_validate(scenario, std::cout, std::cerr);
}
