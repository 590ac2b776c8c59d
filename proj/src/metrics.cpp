#include "forgecurve/metrics.hpp"

#include <cmath>
#include <string>

namespace forgecurve {

EvalMatrix::EvalMatrix(int num_tasks) : k_(num_tasks) {
    if (num_tasks < 1) {
        throw ConfigError("EvalMatrix needs at least one task");
    }
    const std::size_t n = static_cast<std::size_t>(k_) * static_cast<std::size_t>(k_);
    vals_.assign(n, 0.0);
    filled_.assign(n, 0);
}

std::size_t EvalMatrix::slot(int task, int after_task) const {
    if (task < 1 || after_task < 1 || task > after_task || after_task > k_) {
        throw StateError("EvalMatrix entry (" + std::to_string(task) + ", " +
                         std::to_string(after_task) + ") outside the defined triangle of K=" +
                         std::to_string(k_));
    }
    return static_cast<std::size_t>(task - 1) * static_cast<std::size_t>(k_) +
           static_cast<std::size_t>(after_task - 1);
}

void EvalMatrix::set(int task, int after_task, double accuracy) {
    const std::size_t s = slot(task, after_task);
    if (!std::isfinite(accuracy) || accuracy < 0.0 || accuracy > 1.0) {
        throw NumericError("accuracy for (" + std::to_string(task) + ", " +
                           std::to_string(after_task) + ") must be finite in [0, 1]");
    }
    vals_[s] = accuracy;
    filled_[s] = 1;
}

double EvalMatrix::at(int task, int after_task) const {
    const std::size_t s = slot(task, after_task);
    if (!filled_[s]) {
        throw StateError("EvalMatrix entry (" + std::to_string(task) + ", " +
                         std::to_string(after_task) + ") has not been recorded");
    }
    return vals_[s];
}

bool EvalMatrix::defined(int task, int after_task) const {
    if (task < 1 || after_task < 1 || task > after_task || after_task > k_) {
        return false;
    }
    return filled_[slot(task, after_task)] != 0;
}

double overall_performance(const EvalMatrix& m) {
    const int k = m.size();
    if (k < 1) {
        throw StateError("overall_performance on an empty matrix");
    }
    double sum = 0.0;
    for (int i = 1; i <= k; ++i) {
        sum += m.at(i, k);
    }
    return sum / static_cast<double>(k);
}

double backward_transfer(const EvalMatrix& m) {
    const int k = m.size();
    if (k < 2) {
        throw StateError("backward_transfer needs at least two tasks");
    }
    double sum = 0.0;
    for (int i = 1; i < k; ++i) {
        sum += m.at(i, k) - m.at(i, i);
    }
    return sum / static_cast<double>(k - 1);
}

}  // namespace forgecurve
