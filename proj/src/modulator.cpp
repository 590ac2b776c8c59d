#include "forgecurve/modulator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace forgecurve {

void ModulatorConfig::validate() const {
    if (!(beta_base > 0.0) || !std::isfinite(beta_base)) {
        throw ConfigError("beta_base must be positive and finite");
    }
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
        throw ConfigError("gamma must be >= 0 and finite");
    }
    if (!(g_min > 0.0) || !(g_max >= g_min) || !std::isfinite(g_max)) {
        throw ConfigError("clip bounds must satisfy 0 < g_min <= g_max");
    }
}

double replay_strength(const ModulatorConfig& cfg, double r) {
    if (!std::isfinite(r)) {
        throw NumericError("replay_strength: instability ratio is not finite");
    }
    const double scale = std::clamp(1.0 + cfg.gamma * (r - 1.0), cfg.g_min, cfg.g_max);
    return cfg.beta_base * scale;
}

double anchor_penalty(std::span<const double> params, const ParameterSnapshot& anchor) {
    if (params.size() != anchor.values.size()) {
        throw ShapeError("anchor_penalty: length mismatch (" +
                         std::to_string(params.size()) + " vs " +
                         std::to_string(anchor.values.size()) + ")");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double d = params[i] - anchor.values[i];
        sum += d * d;
    }
    return sum;
}

double replay_loss(double task_loss_old, double penalty, double beta) {
    return task_loss_old + beta * penalty;
}

}  // namespace forgecurve
