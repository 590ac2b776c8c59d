#include "forgecurve/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>

#include "forgecurve/rng.hpp"

namespace forgecurve {

std::string run_mode_name(RunMode mode) {
    switch (mode) {
        case RunMode::ForgeCurve: return "forgecurve";
        case RunMode::MixReplay: return "mix_replay";
        case RunMode::FixedInterval: return "fixed_interval";
        case RunMode::Reversed: return "reversed";
        case RunMode::EndOnly: return "end_only";
        case RunMode::StepCalibrated: return "step_calibrated";
        case RunMode::NoReplay: return "no_replay";
        case RunMode::NoRegularizer: return "no_regularizer";
    }
    throw ConfigError("unknown run mode");
}

RunMode run_mode_from_name(const std::string& name) {
    if (name == "forgecurve") return RunMode::ForgeCurve;
    if (name == "mix_replay") return RunMode::MixReplay;
    if (name == "fixed_interval") return RunMode::FixedInterval;
    if (name == "reversed") return RunMode::Reversed;
    if (name == "end_only") return RunMode::EndOnly;
    if (name == "step_calibrated") return RunMode::StepCalibrated;
    if (name == "no_replay") return RunMode::NoReplay;
    if (name == "no_regularizer") return RunMode::NoRegularizer;
    throw ConfigError("unknown run mode '" + name + "'");
}

std::string step_event_name(StepEvent event) {
    switch (event) {
        case StepEvent::None: return "none";
        case StepEvent::WarmupComplete: return "warmup_complete";
        case StepEvent::Replay: return "replay";
        case StepEvent::Consolidation: return "consolidation";
    }
    throw ConfigError("unknown step event");
}

StepEvent step_event_from_name(const std::string& name) {
    if (name == "none") return StepEvent::None;
    if (name == "warmup_complete") return StepEvent::WarmupComplete;
    if (name == "replay") return StepEvent::Replay;
    if (name == "consolidation") return StepEvent::Consolidation;
    throw ParseError("unknown step event '" + name + "'");
}

void TrainConfig::validate() const {
    stream.validate();
    for (int h : hidden_dims) {
        if (h < 1) throw ConfigError("hidden layer widths must be positive");
    }
    if (epochs_per_task < 1) throw ConfigError("epochs_per_task must be >= 1");
    if (replay_epochs_per_event < 1) throw ConfigError("replay_epochs_per_event must be >= 1");
    if (consolidation_epochs < 1) throw ConfigError("consolidation_epochs must be >= 1");
    if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
    if (!std::isfinite(learning_rate) || learning_rate <= 0.0) {
        throw ConfigError("learning_rate must be finite and positive");
    }
    if (!std::isfinite(momentum) || momentum < 0.0 || momentum >= 1.0) {
        throw ConfigError("momentum must be in [0, 1)");
    }
    if (clock.warmup_len < 1) throw ConfigError("warmup_len must be >= 1");
    if (!(clock.ema_coeff > 0.0) || !(clock.ema_coeff <= 1.0)) {
        throw ConfigError("ema_coeff must lie in (0, 1]");
    }
    if (!std::isfinite(clock.epsilon) || clock.epsilon < 0.0) {
        throw ConfigError("epsilon must be finite and >= 0");
    }
    modulator.validate();
    HumanSchedule probe(schedule_days);
    if (fixed_interval_period < 1) throw ConfigError("fixed_interval_period must be >= 1");
    if (steps_per_day < 1) throw ConfigError("steps_per_day must be >= 1");
}

std::vector<int> TrainConfig::layer_dims() const {
    std::vector<int> dims;
    dims.push_back(stream.input_dim);
    dims.insert(dims.end(), hidden_dims.begin(), hidden_dims.end());
    dims.push_back(stream.num_classes);
    return dims;
}

StepOutcome train_step(TinyNet& net, SgdOptimizer& optimizer,
                       const std::vector<Example>& batch) {
    std::vector<double> grad;
    const double loss = net.batch_loss_and_gradient(batch, grad);
    const std::vector<double> prev(net.params().begin(), net.params().end());
    optimizer.step(net.mutable_params(), grad);
    return StepOutcome{loss, compute_delta(prev, net.params())};
}

ReplayOutcome run_replay_event(TinyNet& net, SgdOptimizer& optimizer,
                               const ReplayBuffer& buffer, const ParameterSnapshot& anchor,
                               double beta, double beta_base, int epochs, int batch_size,
                               std::mt19937_64& rng, bool mask_task_term) {
    if (buffer.empty()) {
        std::cerr << "[forgecurve] warning: replay event skipped, memory buffer is empty\n";
        return {};
    }
    if (anchor.values.size() != net.param_count()) {
        throw ShapeError("replay anchor has " + std::to_string(anchor.values.size()) +
                         " values, net has " + std::to_string(net.param_count()));
    }
    if (!std::isfinite(beta) || beta < 0.0) {
        throw NumericError("replay strength beta must be finite and >= 0");
    }
    if (epochs < 1) throw ConfigError("replay epochs must be >= 1");

    ReplayOutcome out;
    std::vector<double> grad;
    for (int e = 0; e < epochs; ++e) {
        double ce_sum = 0.0;
        long batches = 0;
        for (const auto& batch : buffer.epoch_batches(static_cast<std::size_t>(batch_size), rng)) {
            const double ce = net.batch_loss_and_gradient(batch, grad);
            if (mask_task_term) {
                std::fill(grad.begin(), grad.end(), 0.0);
            }
            if (beta != 0.0) {
                auto& params = net.mutable_params();
                for (std::size_t i = 0; i < params.size(); ++i) {
                    grad[i] += 2.0 * beta * (params[i] - anchor.values[i]);
                }
            }
            optimizer.step(net.mutable_params(), grad);
            ce_sum += ce;
            ++batches;
        }
        ReplayEpochLog log;
        log.loss_old = ce_sum / static_cast<double>(batches);
        log.reg_scaled = beta_base * anchor_penalty(net.params(), anchor);
        log.steps = batches;
        out.steps_taken += batches;
        out.epochs.push_back(log);
    }
    return out;
}

double evaluate(const TinyNet& net, const std::vector<Example>& dataset) {
    if (dataset.empty()) {
        throw ShapeError("evaluate: empty dataset");
    }
    long correct = 0;
    for (const Example& ex : dataset) {
        if (net.predict(ex.features) == ex.label) {
            ++correct;
        }
    }
    return static_cast<double>(correct) / static_cast<double>(dataset.size());
}

namespace {

constexpr std::uint64_t kNetInitTag = 1;
constexpr std::uint64_t kTrainRngTag = 2;
constexpr std::uint64_t kBufferUpdateTag = 40000;

TrainConfig validated(TrainConfig cfg) {
    cfg.validate();
    return cfg;
}

}  // namespace

ContinualTrainer::ContinualTrainer(TrainConfig cfg, TrainerHooks hooks)
    : cfg_(validated(std::move(cfg))),
      hooks_(std::move(hooks)),
      net_(cfg_.layer_dims(), mix_seed(cfg_.seed, kNetInitTag)),
      opt_(cfg_.learning_rate, cfg_.momentum),
      buffer_(cfg_.memory_capacity, cfg_.task_balanced_sampling),
      clock_(cfg_.clock),
      train_rng_(make_rng(cfg_.seed, kTrainRngTag)) {
    result_.seed = cfg_.seed;
}

bool ContinualTrainer::scheduled_mode() const {
    return cfg_.mode != RunMode::MixReplay && cfg_.mode != RunMode::NoReplay;
}

double ContinualTrainer::current_ratio_or_neutral(const char* phase) {
    if (clock_.calibrated()) {
        return clock_.instability_ratio();
    }
    std::cerr << "[forgecurve] warning: " << phase
              << " before warm-up calibration; using neutral ratio r=1\n";
    return 1.0;
}

RunResult ContinualTrainer::run() {
    if (result_.matrix.size() != 0) {
        throw StateError("ContinualTrainer::run() may only be called once");
    }
    const TaskStream stream(cfg_.stream);
    const int K = cfg_.stream.num_tasks;
    std::vector<TaskData> tasks;
    tasks.reserve(static_cast<std::size_t>(K));
    for (int k = 1; k <= K; ++k) {
        tasks.push_back(stream.make_task(k));
    }
    result_.matrix = EvalMatrix(K);
    for (int k = 1; k <= K; ++k) {
        result_.tasks.emplace_back();
        task_log_ = &result_.tasks.back();
        task_log_->task_index = k;
        run_task(k, tasks[static_cast<std::size_t>(k - 1)]);
        for (int i = 1; i <= k; ++i) {
            result_.matrix.set(i, k, evaluate(net_, tasks[static_cast<std::size_t>(i - 1)].test));
        }
        result_.total_replay_events += static_cast<long>(task_log_->events.size());
    }
    task_log_ = nullptr;
    return std::move(result_);
}

void ContinualTrainer::run_task(int task_number, const TaskData& data) {
    anchor_.values.assign(net_.params().begin(), net_.params().end());
    task_log_->anchor = anchor_.values;
    clock_.reset_for_new_task();
    schedule_.reset();

    const HumanSchedule human(cfg_.schedule_days);
    switch (cfg_.mode) {
        case RunMode::FixedInterval:
            schedule_ = ReplaySchedule::fixed_interval(cfg_.fixed_interval_period);
            break;
        case RunMode::StepCalibrated:
            schedule_ = ReplaySchedule::step_calibrated(human, cfg_.steps_per_day);
            break;
        case RunMode::EndOnly:
            schedule_ = ReplaySchedule::end_only();
            break;
        default:
            break;  // model-time schedules wait for calibration; baselines have none
    }

    const long n_train = static_cast<long>(data.train.size());
    const long steps_per_epoch = (n_train + cfg_.batch_size - 1) / cfg_.batch_size;
    const long total_steps = steps_per_epoch * cfg_.epochs_per_task;
    if (total_steps < cfg_.clock.warmup_len) {
        std::cerr << "[forgecurve] warning: task " << task_number << " has " << total_steps
                  << " steps, fewer than the warm-up window of " << cfg_.clock.warmup_len
                  << "; calibration never completes and no mid-task replay fires\n";
    }

    std::vector<std::size_t> order(data.train.size());
    std::iota(order.begin(), order.end(), 0);

    for (int epoch = 0; epoch < cfg_.epochs_per_task; ++epoch) {
        std::shuffle(order.begin(), order.end(), train_rng_);
        for (std::size_t start = 0; start < order.size();
             start += static_cast<std::size_t>(cfg_.batch_size)) {
            const std::size_t stop =
                std::min(order.size(), start + static_cast<std::size_t>(cfg_.batch_size));
            std::vector<Example> batch;
            batch.reserve(stop - start + static_cast<std::size_t>(cfg_.batch_size));
            for (std::size_t i = start; i < stop; ++i) {
                batch.push_back(data.train[order[i]]);
            }
            if (cfg_.mode == RunMode::MixReplay && !buffer_.empty()) {
                const std::size_t m =
                    std::min(static_cast<std::size_t>(cfg_.batch_size), buffer_.size());
                for (auto& ex : buffer_.sample_batch(m, train_rng_)) {
                    batch.push_back(std::move(ex));
                }
            }

            auto outcome = train_step(net_, opt_, batch);
            if (hooks_.delta_override) {
                outcome.delta =
                    UpdateDelta(hooks_.delta_override(task_number, clock_.step_in_task() + 1));
            }
            const bool was_calibrated = clock_.calibrated();
            clock_.observe(outcome.delta);
            ++global_step_;
            ++task_log_->train_steps;

            StepEvent event = StepEvent::None;
            if (!was_calibrated && clock_.calibrated()) {
                event = StepEvent::WarmupComplete;
                task_log_->tau_day = clock_.tau_day();
                if (cfg_.mode == RunMode::ForgeCurve || cfg_.mode == RunMode::NoRegularizer) {
                    schedule_ = ReplaySchedule::calibrate(human, clock_.tau_day());
                } else if (cfg_.mode == RunMode::Reversed) {
                    schedule_ = ReplaySchedule::reversed(human, clock_.tau_day());
                }
            }
            result_.rows.push_back(StepLogRow{
                task_number, global_step_, clock_.step_in_task(), outcome.delta.value,
                clock_.tau(), clock_.mu(),
                clock_.calibrated() ? clock_.instability_ratio() : 0.0, 0.0, event,
                outcome.loss, 0.0});

            if (scheduled_mode() && schedule_) {
                const auto poll =
                    schedule_->poll(clock_.tau(), clock_.step_in_task(), task_number, false);
                if (poll.fired) {
                    schedule_ = schedule_->advanced(poll);
                    do_replay_event(task_number, poll);
                }
            }
        }
    }

    if (scheduled_mode() && schedule_) {
        const auto poll =
            schedule_->poll(clock_.tau(), clock_.step_in_task(), task_number, true);
        if (poll.fired) {
            schedule_ = schedule_->advanced(poll);
            do_replay_event(task_number, poll);
        }
    }

    if (scheduled_mode()) {
        do_consolidation(task_number);
    }

    buffer_.update_task(task_number, data.train,
                        mix_seed(cfg_.seed, kBufferUpdateTag + static_cast<std::uint64_t>(task_number)));
    task_log_->clock_steps = clock_.step_in_task();
    task_log_->params_end.assign(net_.params().begin(), net_.params().end());
}

void ContinualTrainer::do_replay_event(int task_number, const SchedulePoll& poll) {
    const double r = current_ratio_or_neutral("replay fired");
    const double beta =
        cfg_.mode == RunMode::NoRegularizer ? 0.0 : replay_strength(cfg_.modulator, r);
    if (poll.crossed > 1) {
        std::cerr << "[forgecurve] note: one replay event consumed " << poll.crossed
                  << " thresholds crossed in a single step\n";
    }
    ReplayEventRecord rec;
    rec.task_index = task_number;
    rec.trigger_global_step = global_step_;
    rec.trigger_step_in_task = clock_.step_in_task();
    rec.tau_at_fire = clock_.tau();
    rec.threshold = poll.threshold;
    rec.thresholds_crossed = poll.crossed;
    rec.r = r;
    rec.beta = beta;

    const auto outcome = run_replay_event(net_, opt_, buffer_, anchor_, beta,
                                          cfg_.modulator.beta_base,
                                          cfg_.replay_epochs_per_event, cfg_.batch_size,
                                          train_rng_, hooks_.mask_replay_task_term);
    if (outcome.epochs.empty()) {
        return;  // empty buffer, already warned
    }
    log_memory_epochs(task_number, outcome.epochs, r, beta, StepEvent::Replay);
    rec.epochs = outcome.epochs;
    task_log_->events.push_back(std::move(rec));
}

void ContinualTrainer::do_consolidation(int task_number) {
    if (buffer_.empty()) {
        return;  // first task, nothing to consolidate
    }
    const double r = current_ratio_or_neutral("consolidation");
    const double beta =
        cfg_.mode == RunMode::NoRegularizer ? 0.0 : replay_strength(cfg_.modulator, r);
    const auto outcome =
        run_replay_event(net_, opt_, buffer_, anchor_, beta, cfg_.modulator.beta_base,
                         cfg_.consolidation_epochs, cfg_.batch_size, train_rng_,
                         /*mask_task_term=*/false);
    if (outcome.epochs.empty()) {
        return;
    }
    log_memory_epochs(task_number, outcome.epochs, r, beta, StepEvent::Consolidation);
    task_log_->consolidation_passes += static_cast<int>(outcome.epochs.size());
}

void ContinualTrainer::log_memory_epochs(int task_number,
                                         const std::vector<ReplayEpochLog>& epochs, double r,
                                         double beta, StepEvent event) {
    for (const auto& epoch : epochs) {
        global_step_ += epoch.steps;
        result_.rows.push_back(StepLogRow{task_number, global_step_, clock_.step_in_task(),
                                          0.0, clock_.tau(), clock_.mu(), r, beta, event,
                                          epoch.loss_old, epoch.reg_scaled});
    }
}

RunResult run_sequence(const TrainConfig& cfg, TrainerHooks hooks) {
    ContinualTrainer trainer(cfg, std::move(hooks));
    return trainer.run();
}

}  // namespace forgecurve
