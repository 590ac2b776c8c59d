#pragma once

#include <vector>

#include "forgecurve/errors.hpp"

namespace forgecurve {

// Accuracy matrix a_{i,j}: performance on task i measured after finishing
// task j. Only the lower-triangular half (i <= j) is ever defined; indices
// are 1-based to match the task numbering.
class EvalMatrix {
public:
    EvalMatrix() = default;
    explicit EvalMatrix(int num_tasks);

    int size() const { return k_; }

    void set(int task, int after_task, double accuracy);
    double at(int task, int after_task) const;
    bool defined(int task, int after_task) const;

    bool operator==(const EvalMatrix& other) const = default;

private:
    std::size_t slot(int task, int after_task) const;

    int k_ = 0;
    std::vector<double> vals_;
    std::vector<char> filled_;
};

// Mean accuracy over all tasks after the final one: (1/K) sum_i a_{i,K}.
double overall_performance(const EvalMatrix& m);

// Mean end-of-run drop from each task's own-training accuracy:
// (1/(K-1)) sum_{i<K} (a_{i,K} - a_{i,i}). Needs K >= 2.
double backward_transfer(const EvalMatrix& m);

}  // namespace forgecurve
