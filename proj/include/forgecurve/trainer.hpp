#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "forgecurve/memory.hpp"
#include "forgecurve/metrics.hpp"
#include "forgecurve/model_clock.hpp"
#include "forgecurve/modulator.hpp"
#include "forgecurve/net.hpp"
#include "forgecurve/schedule.hpp"
#include "forgecurve/tasks.hpp"

namespace forgecurve {

// How a run treats replay. The first six follow the scheduled-replay loop
// (with different schedules, or beta forced to zero); mix_replay and
// no_replay are separate baselines that never consult a schedule.
enum class RunMode {
    ForgeCurve,
    MixReplay,
    FixedInterval,
    Reversed,
    EndOnly,
    StepCalibrated,
    NoReplay,
    NoRegularizer,
};

std::string run_mode_name(RunMode mode);
RunMode run_mode_from_name(const std::string& name);

struct TrainConfig {
    TaskStreamConfig stream;
    std::vector<int> hidden_dims = {32};
    int epochs_per_task = 10;
    int replay_epochs_per_event = 2;
    int consolidation_epochs = 1;
    int batch_size = 8;
    double learning_rate = 0.05;
    double momentum = 0.0;
    ClockConfig clock;
    ModulatorConfig modulator;
    RunMode mode = RunMode::ForgeCurve;
    std::vector<double> schedule_days = {1, 2, 4, 7, 15, 30};
    long fixed_interval_period = 24;
    long steps_per_day = 24;
    Capacity memory_capacity = Capacity::fraction(0.02);
    bool task_balanced_sampling = false;
    std::uint64_t seed = 0;

    void validate() const;
    std::vector<int> layer_dims() const;
};

enum class StepEvent { None, WarmupComplete, Replay, Consolidation };

std::string step_event_name(StepEvent event);
StepEvent step_event_from_name(const std::string& name);

// One log row per optimizer step that concludes a loggable unit: every
// current-task training step, plus one row per replay or consolidation
// epoch (logged at that epoch's last optimizer step). global_step counts
// every optimizer step in the run, across all phases, so rows are strictly
// ordered by it. beta is nonzero only on replay/consolidation rows; r is 0
// until the warm-up completes.
struct StepLogRow {
    int task_index = 0;
    long global_step = 0;
    long step_in_task = 0;
    double delta = 0.0;
    double tau = 0.0;
    double mu = 0.0;
    double r = 0.0;
    double beta = 0.0;
    StepEvent event = StepEvent::None;
    double loss_task = 0.0;
    double loss_reg_scaled = 0.0;
};

struct ReplayEpochLog {
    double loss_old = 0.0;    // mean cross-entropy on memory batches
    double reg_scaled = 0.0;  // beta_base * anchor penalty at epoch end
    long steps = 0;           // optimizer steps taken in this epoch
};

struct ReplayEventRecord {
    int task_index = 0;
    long trigger_global_step = 0;
    long trigger_step_in_task = 0;
    double tau_at_fire = 0.0;
    double threshold = 0.0;
    std::size_t thresholds_crossed = 0;
    double r = 0.0;
    double beta = 0.0;
    std::vector<ReplayEpochLog> epochs;
};

struct TaskRunLog {
    int task_index = 0;
    long train_steps = 0;
    long clock_steps = 0;
    double tau_day = 0.0;  // 0 when the warm-up never completed
    std::vector<ReplayEventRecord> events;
    int consolidation_passes = 0;
    std::vector<double> anchor;      // parameters at task start
    std::vector<double> params_end;  // parameters after consolidation
};

struct RunResult {
    EvalMatrix matrix;
    std::vector<StepLogRow> rows;
    std::vector<TaskRunLog> tasks;
    long total_replay_events = 0;
    std::uint64_t seed = 0;
};

// Test seams: inject a synthetic delta trace into the clock, or drop the
// old-task loss term inside replay events (pure anchor descent).
struct TrainerHooks {
    std::function<double(int task_index, long step_in_task)> delta_override;
    bool mask_replay_task_term = false;
};

struct StepOutcome {
    double loss = 0.0;
    UpdateDelta delta;
};

// One optimizer step on the batch's cross-entropy; delta is the Euclidean
// norm of the applied parameter change.
StepOutcome train_step(TinyNet& net, SgdOptimizer& optimizer,
                       const std::vector<Example>& batch);

struct ReplayOutcome {
    std::vector<ReplayEpochLog> epochs;
    long steps_taken = 0;
};

// Optimizes cross-entropy on memory plus beta * anchor penalty for `epochs`
// passes over the buffer. An empty buffer is skipped with a warning.
ReplayOutcome run_replay_event(TinyNet& net, SgdOptimizer& optimizer,
                               const ReplayBuffer& buffer, const ParameterSnapshot& anchor,
                               double beta, double beta_base, int epochs, int batch_size,
                               std::mt19937_64& rng, bool mask_task_term = false);

// Fraction of argmax-correct predictions; deterministic.
double evaluate(const TinyNet& net, const std::vector<Example>& dataset);

// Drives the full task sequence: per task, anchor snapshot, clock reset,
// epochs of streamed batches feeding the clock, scheduled replay events,
// end-of-task consolidation, then the buffer update and a row of the
// evaluation matrix.
class ContinualTrainer {
public:
    explicit ContinualTrainer(TrainConfig cfg, TrainerHooks hooks = {});

    RunResult run();

    const TrainConfig& config() const { return cfg_; }
    const ReplayBuffer& buffer() const { return buffer_; }

private:
    void run_task(int task_number, const TaskData& data);
    void do_replay_event(int task_number, const SchedulePoll& poll);
    void do_consolidation(int task_number);
    void log_memory_epochs(int task_number, const std::vector<ReplayEpochLog>& epochs,
                           double r, double beta, StepEvent event);
    double current_ratio_or_neutral(const char* phase);
    bool scheduled_mode() const;

    TrainConfig cfg_;
    TrainerHooks hooks_;
    TinyNet net_;
    SgdOptimizer opt_;
    ReplayBuffer buffer_;
    ModelClock clock_;
    std::mt19937_64 train_rng_;
    std::optional<ReplaySchedule> schedule_;
    ParameterSnapshot anchor_;
    long global_step_ = 0;
    RunResult result_;
    TaskRunLog* task_log_ = nullptr;
};

// Convenience wrapper: build the stream from cfg.stream and run end to end.
RunResult run_sequence(const TrainConfig& cfg, TrainerHooks hooks = {});

}  // namespace forgecurve
