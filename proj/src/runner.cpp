#include "forgecurve/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>

#include <json.hpp>

#include "forgecurve/csv.hpp"
#include "forgecurve/trainer.hpp"

namespace forgecurve {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<ScheduleSimRow> simulate_schedule(const std::vector<double>& deltas,
                                              const ClockConfig& clock_cfg,
                                              const HumanSchedule& days) {
    ModelClock clock(clock_cfg);
    std::optional<ReplaySchedule> schedule;
    std::vector<ScheduleSimRow> rows;
    rows.reserve(deltas.size());
    for (double d : deltas) {
        const bool was_calibrated = clock.calibrated();
        clock.observe(UpdateDelta(d));
        if (!was_calibrated && clock.calibrated()) {
            schedule = ReplaySchedule::calibrate(days, clock.tau_day());
        }
        bool fired = false;
        if (schedule) {
            const auto poll = schedule->poll(clock.tau(), clock.step_in_task(),
                                             /*task_index=*/2, /*task_finished=*/false);
            if (poll.fired) {
                schedule = schedule->advanced(poll);
                fired = true;
            }
        }
        rows.push_back(ScheduleSimRow{clock.step_in_task(), d, clock.tau(), fired});
    }
    return rows;
}

std::vector<long> fired_steps(const std::vector<ScheduleSimRow>& rows) {
    std::vector<long> steps;
    for (const auto& row : rows) {
        if (row.fired) steps.push_back(row.step);
    }
    return steps;
}

namespace {

double mean_of(const std::vector<double>& v) {
    double sum = 0.0;
    for (double x : v) sum += x;
    return sum / static_cast<double>(v.size());
}

double sample_sd(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean_of(v);
    double acc = 0.0;
    for (double x : v) acc += (x - m) * (x - m);
    return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);  // binary keeps '\n' endings everywhere
    if (!out) {
        throw ConfigError("cannot open '" + path.string() + "' for writing");
    }
    return out;
}

struct SeedArtifacts {
    double op = 0.0;
    std::optional<double> bwt;
    long replay_events = 0;
    std::vector<long> events_per_task;
    double wall_time_s = 0.0;
};

SeedArtifacts run_one_seed(const TrainConfig& base, std::uint64_t seed, const fs::path& dir,
                           const std::string& file_suffix) {
    TrainConfig tc = base;
    tc.seed = seed;
    tc.stream.seed = seed;

    const auto t0 = std::chrono::steady_clock::now();
    ContinualTrainer trainer(tc);
    const RunResult res = trainer.run();
    const auto t1 = std::chrono::steady_clock::now();

    {
        auto out = open_out(dir / ("steps" + file_suffix + ".csv"));
        write_step_log(out, res.rows);
    }
    {
        auto out = open_out(dir / ("matrix" + file_suffix + ".csv"));
        write_matrix_csv(out, res.matrix);
    }
    {
        auto out = open_out(dir / ("buffer" + file_suffix + ".csv"));
        trainer.buffer().dump_csv(out);
    }

    SeedArtifacts art;
    art.op = overall_performance(res.matrix);
    if (res.matrix.size() >= 2) {
        art.bwt = backward_transfer(res.matrix);
    }
    art.replay_events = res.total_replay_events;
    for (const auto& task : res.tasks) {
        art.events_per_task.push_back(static_cast<long>(task.events.size()));
    }
    art.wall_time_s = std::chrono::duration<double>(t1 - t0).count();
    return art;
}

std::string fixed4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

}  // namespace

int cmd_run(const RunConfig& cfg) {
    fs::create_directories(cfg.out_dir);
    const fs::path dir(cfg.out_dir);

    json per_seed = json::array();
    std::vector<double> ops, bwts;
    for (std::uint64_t seed : cfg.seeds) {
        const auto art = run_one_seed(cfg.train, seed, dir, "_seed" + std::to_string(seed));
        json entry;
        entry["seed"] = seed;
        entry["op"] = art.op;
        entry["bwt"] = art.bwt ? json(*art.bwt) : json(nullptr);
        entry["replay_events"] = art.replay_events;
        entry["replay_events_per_task"] = art.events_per_task;
        entry["wall_time_s"] = art.wall_time_s;
        per_seed.push_back(entry);
        ops.push_back(art.op);
        if (art.bwt) bwts.push_back(*art.bwt);

        std::cout << "seed " << seed << ": OP=" << fixed4(art.op)
                  << " BWT=" << (art.bwt ? fixed4(*art.bwt) : std::string("n/a"))
                  << " replay_events=" << art.replay_events << "\n";
    }

    json summary;
    summary["mode"] = run_mode_name(cfg.train.mode);
    summary["seeds"] = cfg.seeds;
    summary["per_seed"] = per_seed;
    json agg;
    agg["op_mean"] = mean_of(ops);
    agg["op_sd"] = sample_sd(ops);
    if (!bwts.empty()) {
        agg["bwt_mean"] = mean_of(bwts);
        agg["bwt_sd"] = sample_sd(bwts);
    } else {
        agg["bwt_mean"] = nullptr;
        agg["bwt_sd"] = nullptr;
    }
    summary["aggregate"] = agg;
    {
        auto out = open_out(dir / "summary.json");
        out << summary.dump(2) << "\n";
    }

    std::cout << "aggregate: OP=" << fixed4(mean_of(ops)) << " +/- " << fixed4(sample_sd(ops));
    if (!bwts.empty()) {
        std::cout << ", BWT=" << fixed4(mean_of(bwts)) << " +/- " << fixed4(sample_sd(bwts));
    }
    std::cout << " over " << cfg.seeds.size() << " seed(s)\n";
    std::cout << "artifacts in " << dir.string() << "\n";
    return 0;
}

int cmd_simulate_schedule(const RunConfig& cfg, const std::string& trace_path) {
    std::ifstream in(trace_path);
    if (!in) {
        throw ConfigError("cannot open trace file '" + trace_path + "'");
    }
    const auto deltas = read_delta_trace(in, trace_path);
    const auto rows =
        simulate_schedule(deltas, cfg.train.clock, HumanSchedule(cfg.train.schedule_days));

    fs::create_directories(cfg.out_dir);
    const fs::path out_path = fs::path(cfg.out_dir) / "schedule_sim.csv";
    {
        auto out = open_out(out_path);
        out << "step,delta,tau,fired\n";
        for (const auto& row : rows) {
            out << row.step << ',' << format_double(row.delta) << ',' << format_double(row.tau)
                << ',' << (row.fired ? 1 : 0) << '\n';
        }
    }

    const auto steps = fired_steps(rows);
    std::cout << steps.size() << " replay trigger(s)";
    if (!steps.empty()) {
        std::cout << " at step(s):";
        for (long s : steps) std::cout << ' ' << s;
    }
    std::cout << "\nwrote " << out_path.string() << "\n";
    return 0;
}

int cmd_metrics(const std::string& matrix_path) {
    std::ifstream in(matrix_path);
    if (!in) {
        throw ConfigError("cannot open matrix file '" + matrix_path + "'");
    }
    const EvalMatrix m = read_matrix_csv(in, matrix_path);
    const double op = overall_performance(m);
    const double bwt = backward_transfer(m);
    std::cout << "OP=" << fixed4(op) << "\n";
    std::cout << "BWT=" << fixed4(bwt) << "\n";
    return 0;
}

namespace {

struct CompareCell {
    RunMode mode = RunMode::ForgeCurve;
    std::uint64_t seed = 0;
    bool ok = false;
    std::string error;
    double op = 0.0;
    std::optional<double> bwt;
    long replay_events = 0;
    double wall_time_s = 0.0;
};

CompareCell run_cell(const RunConfig& cfg, RunMode mode, std::uint64_t seed) {
    CompareCell cell;
    cell.mode = mode;
    cell.seed = seed;
    try {
        TrainConfig tc = cfg.train;
        tc.mode = mode;
        const fs::path dir = fs::path(cfg.out_dir) / "cells" /
                             (run_mode_name(mode) + "_seed" + std::to_string(seed));
        fs::create_directories(dir);
        const auto art = run_one_seed(tc, seed, dir, "");
        cell.ok = true;
        cell.op = art.op;
        cell.bwt = art.bwt;
        cell.replay_events = art.replay_events;
        cell.wall_time_s = art.wall_time_s;
    } catch (const std::exception& e) {
        cell.ok = false;
        cell.error = e.what();
    }
    return cell;
}

}  // namespace

int cmd_compare(const RunConfig& cfg, const std::vector<RunMode>& modes) {
    if (modes.empty()) {
        throw ConfigError("compare needs at least one --mode");
    }
    fs::create_directories(cfg.out_dir);

    std::vector<std::future<CompareCell>> futures;
    for (RunMode mode : modes) {
        for (std::uint64_t seed : cfg.seeds) {
            futures.push_back(
                std::async(std::launch::async, run_cell, std::cref(cfg), mode, seed));
        }
    }
    std::vector<CompareCell> cells;
    cells.reserve(futures.size());
    for (auto& f : futures) {
        cells.push_back(f.get());
    }

    const fs::path table_path = fs::path(cfg.out_dir) / "compare.csv";
    auto out = open_out(table_path);
    out << "mode,seed,status,op,bwt,replay_events,wall_time_s,op_sd,bwt_sd\n";
    bool all_ok = true;
    for (const auto& cell : cells) {
        out << run_mode_name(cell.mode) << ',' << cell.seed << ','
            << (cell.ok ? "ok" : "error") << ',';
        if (cell.ok) {
            out << format_double(cell.op) << ','
                << (cell.bwt ? format_double(*cell.bwt) : std::string()) << ','
                << cell.replay_events << ',' << format_double(cell.wall_time_s);
        } else {
            out << ",,,";
            all_ok = false;
            std::cerr << "[forgecurve] compare cell " << run_mode_name(cell.mode) << "/seed "
                      << cell.seed << " failed: " << cell.error << "\n";
        }
        out << ",,\n";
    }
    for (RunMode mode : modes) {
        std::vector<double> ops, bwts, walls;
        double events = 0.0;
        long n_ok = 0;
        for (const auto& cell : cells) {
            if (cell.mode != mode || !cell.ok) continue;
            ++n_ok;
            ops.push_back(cell.op);
            if (cell.bwt) bwts.push_back(*cell.bwt);
            walls.push_back(cell.wall_time_s);
            events += static_cast<double>(cell.replay_events);
        }
        out << run_mode_name(mode) << ",all,aggregate,";
        if (n_ok > 0) {
            out << format_double(mean_of(ops)) << ','
                << (bwts.empty() ? std::string() : format_double(mean_of(bwts))) << ','
                << format_double(events / static_cast<double>(n_ok)) << ','
                << format_double(mean_of(walls)) << ',' << format_double(sample_sd(ops)) << ','
                << (bwts.empty() ? std::string() : format_double(sample_sd(bwts)));
        } else {
            out << ",,,,,";
        }
        out << '\n';

        if (n_ok > 0) {
            std::cout << run_mode_name(mode) << ": OP=" << fixed4(mean_of(ops)) << " +/- "
                      << fixed4(sample_sd(ops));
            if (!bwts.empty()) {
                std::cout << ", BWT=" << fixed4(mean_of(bwts)) << " +/- "
                          << fixed4(sample_sd(bwts));
            }
            std::cout << " (" << n_ok << " seed(s))\n";
        } else {
            std::cout << run_mode_name(mode) << ": all cells failed\n";
        }
    }
    std::cout << "wrote " << table_path.string() << "\n";
    return all_ok ? 0 : 1;
}

}  // namespace forgecurve
