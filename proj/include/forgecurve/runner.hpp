#pragma once

#include <string>
#include <vector>

#include "forgecurve/config.hpp"
#include "forgecurve/model_clock.hpp"
#include "forgecurve/schedule.hpp"

namespace forgecurve {

struct ScheduleSimRow {
    long step = 0;
    double delta = 0.0;
    double tau = 0.0;
    bool fired = false;
};

// Pure clock + schedule replay of a recorded delta trace, evaluated as if
// mid-sequence (the first-task gate passes). No training involved.
std::vector<ScheduleSimRow> simulate_schedule(const std::vector<double>& deltas,
                                              const ClockConfig& clock_cfg,
                                              const HumanSchedule& days);

std::vector<long> fired_steps(const std::vector<ScheduleSimRow>& rows);

// One full run per seed; writes steps_seed<S>.csv, matrix_seed<S>.csv,
// buffer_seed<S>.csv and summary.json under cfg.out_dir.
int cmd_run(const RunConfig& cfg);

// Reads a `step,delta` trace, writes <out>/schedule_sim.csv with columns
// step,delta,tau,fired.
int cmd_simulate_schedule(const RunConfig& cfg, const std::string& trace_path);

// Prints OP and BWT of a matrix CSV with 4 decimal places.
int cmd_metrics(const std::string& matrix_path);

// Runs every (mode, seed) cell independently (in parallel), writes per-cell
// artifacts plus one merged <out>/compare.csv with per-mode aggregate rows.
int cmd_compare(const RunConfig& cfg, const std::vector<RunMode>& modes);

}  // namespace forgecurve
