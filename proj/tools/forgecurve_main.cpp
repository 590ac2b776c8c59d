#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "forgecurve/config.hpp"
#include "forgecurve/runner.hpp"

namespace {

// Layering: config file first, then --set overrides in order, then the
// dedicated flags (--seed / --mode / --out) with the last word.
forgecurve::RunConfig assemble_config(const std::string& config_path,
                                      const std::vector<std::string>& sets,
                                      const std::vector<std::uint64_t>& seeds,
                                      const std::string& mode, const std::string& out_dir) {
    forgecurve::RunConfig cfg;
    if (!config_path.empty()) {
        cfg = forgecurve::load_run_config(config_path);
    }
    for (const auto& assignment : sets) {
        forgecurve::apply_override(cfg, assignment);
    }
    if (!seeds.empty()) {
        cfg.seeds = seeds;
    }
    if (!mode.empty()) {
        cfg.train.mode = forgecurve::run_mode_from_name(mode);
    }
    if (!out_dir.empty()) {
        cfg.out_dir = out_dir;
    }
    return cfg;
}

struct CommonFlags {
    std::string config_path;
    std::vector<std::string> sets;
    std::vector<std::uint64_t> seeds;
    std::string mode;
    std::string out_dir;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool with_mode = true) {
    cmd->add_option("--config", flags.config_path, "Config file (flat JSON object)");
    cmd->add_option("--set", flags.sets, "Override a config key, key=value (repeatable)");
    cmd->add_option("--seed", flags.seeds, "Run seed (repeatable, overrides config seeds)");
    if (with_mode) {
        cmd->add_option("--mode", flags.mode,
                        "Run mode: forgecurve|mix_replay|fixed_interval|reversed|end_only|"
                        "step_calibrated|no_replay|no_regularizer");
    }
    cmd->add_option("--out", flags.out_dir, "Output directory");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Forgetting-curve replay scheduling for continual learning"};
    app.require_subcommand(1);

    CommonFlags run_flags;
    auto* run_cmd = app.add_subcommand("run", "Train on the task sequence and log artifacts");
    add_common(run_cmd, run_flags);

    CommonFlags sim_flags;
    std::string trace_path;
    auto* sim_cmd = app.add_subcommand(
        "simulate-schedule", "Replay a recorded delta trace through clock and schedule");
    sim_cmd->add_option("trace", trace_path, "Delta trace CSV with header step,delta")
        ->required();
    add_common(sim_cmd, sim_flags, /*with_mode=*/false);

    std::string matrix_path;
    auto* metrics_cmd =
        app.add_subcommand("metrics", "Print OP and BWT for an accuracy matrix CSV");
    metrics_cmd->add_option("matrix", matrix_path, "Matrix CSV with header i,j,accuracy")
        ->required();

    CommonFlags cmp_flags;
    std::vector<std::string> cmp_modes;
    auto* cmp_cmd =
        app.add_subcommand("compare", "Run several modes side by side and tabulate metrics");
    cmp_cmd->add_option("--config", cmp_flags.config_path, "Config file (flat JSON object)");
    cmp_cmd->add_option("--set", cmp_flags.sets, "Override a config key, key=value (repeatable)");
    cmp_cmd->add_option("--seed", cmp_flags.seeds, "Run seed (repeatable, overrides config seeds)");
    cmp_cmd->add_option("--mode", cmp_modes, "Mode to include (repeatable, at least one)")
        ->required();
    cmp_cmd->add_option("--out", cmp_flags.out_dir, "Output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(run_cmd)) {
            const auto cfg = assemble_config(run_flags.config_path, run_flags.sets,
                                             run_flags.seeds, run_flags.mode, run_flags.out_dir);
            return forgecurve::cmd_run(cfg);
        }
        if (app.got_subcommand(sim_cmd)) {
            const auto cfg = assemble_config(sim_flags.config_path, sim_flags.sets,
                                             sim_flags.seeds, sim_flags.mode, sim_flags.out_dir);
            return forgecurve::cmd_simulate_schedule(cfg, trace_path);
        }
        if (app.got_subcommand(metrics_cmd)) {
            return forgecurve::cmd_metrics(matrix_path);
        }
        if (app.got_subcommand(cmp_cmd)) {
            const auto cfg = assemble_config(cmp_flags.config_path, cmp_flags.sets,
                                             cmp_flags.seeds, "", cmp_flags.out_dir);
            std::vector<forgecurve::RunMode> modes;
            for (const auto& name : cmp_modes) {
                modes.push_back(forgecurve::run_mode_from_name(name));
            }
            return forgecurve::cmd_compare(cfg, modes);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
