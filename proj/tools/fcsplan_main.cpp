#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include <fcsplan/rng.hpp>
#include <fcsplan/run.hpp>

namespace {

struct CommonOpts {
    std::string config_path;
    std::string mode_override;
    std::string out_override;
    std::int64_t seed_override = -1;
    int workers_override = -1;
    bool trace = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("-c,--config", opts.config_path, "Run configuration JSON")->required();
    cmd->add_option("--seed", opts.seed_override, "Override the top-level seed");
    cmd->add_option("--out", opts.out_override, "Override the output directory");
    cmd->add_option("--workers", opts.workers_override,
                    "Evaluation worker threads (0 = logical cores)");
    cmd->add_flag("--trace-objective", opts.trace,
                  "Emit per-evaluation component breakdowns (JSON lines)");
}

int load_config(const CommonOpts& opts, fcsplan::RunConfig& config) {
    try {
        config = fcsplan::RunConfig::from_file(opts.config_path);
    } catch (const fcsplan::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return fcsplan::kExitConfigUnreadable;
    } catch (const fcsplan::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return fcsplan::kExitValidationFailure;
    }
    if (opts.seed_override >= 0) {
        const auto seed = static_cast<std::uint64_t>(opts.seed_override);
        config.fleet.seed = seed;
        config.ce.seed = fcsplan::splitmix64(seed);
    }
    if (!opts.out_override.empty()) config.out_dir = opts.out_override;
    if (opts.workers_override >= 0) config.ce.workers = opts.workers_override;
    if (opts.trace) config.trace_objective = true;
    return fcsplan::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fast-charging station location planning on a coupled "
                 "transportation/power network"};
    app.require_subcommand(1);

    CommonOpts run_opts;
    CLI::App* run_cmd = app.add_subcommand(
        "run", "Run the configured pipeline (modes: ce, enumerate, evaluate-placement)");
    add_common(run_cmd, run_opts);
    std::string mode_override;
    run_cmd->add_option("--mode", mode_override, "Override the mode")
        ->check(CLI::IsMember({"ce", "enumerate", "evaluate-placement"}));

    CommonOpts cmp_opts;
    std::string placements_path;
    CLI::App* cmp_cmd =
        app.add_subcommand("compare", "Rank a list of placements under one scenario");
    add_common(cmp_cmd, cmp_opts);
    cmp_cmd->add_option("-p,--placements", placements_path,
                        "File with one 0/1 placement row per line")
        ->required();

    CLI11_PARSE(app, argc, argv);

    if (run_cmd->parsed()) {
        fcsplan::RunConfig config;
        if (const int rc = load_config(run_opts, config); rc != fcsplan::kExitOk) return rc;
        if (mode_override == "ce") config.mode = fcsplan::RunMode::Ce;
        if (mode_override == "enumerate") config.mode = fcsplan::RunMode::Enumerate;
        if (mode_override == "evaluate-placement")
            config.mode = fcsplan::RunMode::EvaluatePlacement;
        std::string error;
        const int rc = fcsplan::cmd_run(config, &error);
        if (!error.empty()) std::cerr << "error: " << error << "\n";
        if (rc == fcsplan::kExitOk)
            std::cout << "done: artifacts written to " << config.out_dir << "\n";
        if (rc == fcsplan::kExitNotConverged)
            std::cout << "not converged within max_iterations; best-so-far written to "
                      << config.out_dir << "\n";
        return rc;
    }

    fcsplan::RunConfig config;
    if (const int rc = load_config(cmp_opts, config); rc != fcsplan::kExitOk) return rc;
    std::string error;
    const int rc = fcsplan::cmd_compare(config, placements_path, &error);
    if (!error.empty()) std::cerr << "error: " << error << "\n";
    return rc;
}
