#pragma once

#include <span>

#include "forgecurve/errors.hpp"

namespace forgecurve {

// L2 norm of one applied parameter update. Non-negative and finite by
// construction; the only way to build one with a payload is through the
// validating constructor or compute_delta().
struct UpdateDelta {
    double value = 0.0;

    UpdateDelta() = default;
    explicit UpdateDelta(double v);
};

// Euclidean norm of (new_params - prev_params). Both vectors must be the
// same non-zero length with finite entries.
UpdateDelta compute_delta(std::span<const double> prev_params,
                          std::span<const double> new_params);

struct ClockConfig {
    long warmup_len = 24;     // S, steps used to calibrate tau_day and mu0
    double ema_coeff = 0.05;  // lambda in (0, 1]
    double epsilon = 1e-12;   // added to mu0 in the instability ratio
    bool include_warmup_in_tau = false;
};

// Converts a stream of update magnitudes into a model-centric notion of time.
//
// The first `warmup_len` observed deltas calibrate a virtual day
// (tau_day = their sum) and a baseline intensity (mu0 = their mean). After
// calibration, tau accumulates each delta and mu tracks an exponential
// moving average of recent deltas. By default warm-up deltas do not count
// toward tau; set include_warmup_in_tau to change that.
//
// Single-writer state machine: one clock belongs to one training run.
class ModelClock {
public:
    explicit ModelClock(ClockConfig cfg = {});

    // Records one update. Increments step_in_task, accumulates warm-up
    // statistics and, once calibrated, advances tau and the EMA.
    void observe(UpdateDelta delta);

    // Zeroes all per-task state; configuration is preserved.
    void reset_for_new_task();

    // mu / (mu0 + epsilon). Requires a completed warm-up.
    double instability_ratio() const;

    long step_in_task() const { return step_in_task_; }
    double tau() const { return tau_; }
    double mu() const { return mu_; }
    double warmup_sum() const { return warmup_sum_; }
    bool calibrated() const { return calibrated_; }

    // Throw StateError until warm-up completes.
    double tau_day() const;
    double mu0() const;

    const ClockConfig& config() const { return cfg_; }

private:
    ClockConfig cfg_;
    long step_in_task_ = 0;
    double warmup_sum_ = 0.0;
    double tau_ = 0.0;
    double mu_ = 0.0;
    double tau_day_ = 0.0;
    double mu0_ = 0.0;
    bool calibrated_ = false;
};

}  // namespace forgecurve
