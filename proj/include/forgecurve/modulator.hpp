#pragma once

#include <span>
#include <vector>

#include "forgecurve/errors.hpp"

namespace forgecurve {

// Intensity-aware regularization strength parameters.
struct ModulatorConfig {
    double beta_base = 1e-3;  // balances penalty against task loss
    double gamma = 1.0;       // sensitivity to the instability ratio
    double g_min = 0.5;       // clip bounds on the scaling factor
    double g_max = 3.0;

    void validate() const;
};

// Trainable parameters at the end of the previous task; the reference point
// of the anchored penalty.
struct ParameterSnapshot {
    std::vector<double> values;
};

// beta_base * clip(1 + gamma * (r - 1), g_min, g_max).
double replay_strength(const ModulatorConfig& cfg, double r);

// Sum of squared coordinate differences between params and the anchor.
double anchor_penalty(std::span<const double> params, const ParameterSnapshot& anchor);

// task_loss_old + beta * penalty.
double replay_loss(double task_loss_old, double penalty, double beta);

}  // namespace forgecurve
