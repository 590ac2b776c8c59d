#include "forgecurve/model_clock.hpp"

#include <cmath>
#include <string>

namespace forgecurve {

UpdateDelta::UpdateDelta(double v) : value(v) {
    if (!std::isfinite(v)) {
        throw NumericError("update delta is not finite");
    }
    if (v < 0.0) {
        throw NumericError("update delta is negative: " + std::to_string(v));
    }
}

UpdateDelta compute_delta(std::span<const double> prev_params,
                          std::span<const double> new_params) {
    if (prev_params.empty()) {
        throw ShapeError("compute_delta: empty parameter vectors");
    }
    if (prev_params.size() != new_params.size()) {
        throw ShapeError("compute_delta: length mismatch (" +
                         std::to_string(prev_params.size()) + " vs " +
                         std::to_string(new_params.size()) + ")");
    }
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < prev_params.size(); ++i) {
        if (!std::isfinite(prev_params[i]) || !std::isfinite(new_params[i])) {
            throw NumericError("compute_delta: non-finite entry at index " +
                               std::to_string(i));
        }
        const double d = new_params[i] - prev_params[i];
        sum_sq += d * d;
    }
    return UpdateDelta(std::sqrt(sum_sq));
}

ModelClock::ModelClock(ClockConfig cfg) : cfg_(cfg) {
    if (cfg_.warmup_len < 1) {
        throw ConfigError("warmup_len must be >= 1");
    }
    if (!(cfg_.ema_coeff > 0.0) || cfg_.ema_coeff > 1.0) {
        throw ConfigError("ema_coeff must be in (0, 1]");
    }
    if (!(cfg_.epsilon >= 0.0)) {
        throw ConfigError("epsilon must be >= 0");
    }
}

void ModelClock::observe(UpdateDelta delta) {
    const double d = delta.value;
    ++step_in_task_;
    if (!calibrated_) {
        warmup_sum_ += d;
        if (cfg_.include_warmup_in_tau) {
            tau_ += d;
        }
        if (step_in_task_ == cfg_.warmup_len) {
            tau_day_ = warmup_sum_;
            mu0_ = warmup_sum_ / static_cast<double>(cfg_.warmup_len);
            mu_ = mu0_;
            calibrated_ = true;
        }
        return;
    }
    tau_ += d;
    // Incremental form of (1-lambda)*mu + lambda*d: keeps the fixed point
    // exact when d == mu.
    mu_ += cfg_.ema_coeff * (d - mu_);
}

void ModelClock::reset_for_new_task() {
    step_in_task_ = 0;
    warmup_sum_ = 0.0;
    tau_ = 0.0;
    mu_ = 0.0;
    tau_day_ = 0.0;
    mu0_ = 0.0;
    calibrated_ = false;
}

double ModelClock::instability_ratio() const {
    if (!calibrated_) {
        throw StateError("instability_ratio: warm-up not complete");
    }
    return mu_ / (mu0_ + cfg_.epsilon);
}

double ModelClock::tau_day() const {
    if (!calibrated_) {
        throw StateError("tau_day: warm-up not complete");
    }
    return tau_day_;
}

double ModelClock::mu0() const {
    if (!calibrated_) {
        throw StateError("mu0: warm-up not complete");
    }
    return mu0_;
}

}  // namespace forgecurve
