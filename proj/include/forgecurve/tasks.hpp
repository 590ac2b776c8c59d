#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "forgecurve/errors.hpp"
#include "forgecurve/memory.hpp"

namespace forgecurve {

// How successive tasks are derived from the shared Gaussian-mixture base
// problem: permute input coordinates, or rotate the class means.
enum class TaskGenerator { PermutedFeatures, RotatedGaussians };

std::string task_generator_name(TaskGenerator gen);
TaskGenerator task_generator_from_name(const std::string& name);

struct TaskStreamConfig {
    int num_tasks = 5;
    int samples_per_task = 500;
    int num_classes = 5;
    int input_dim = 16;
    TaskGenerator generator = TaskGenerator::PermutedFeatures;
    double train_fraction = 0.8;
    double mean_scale = 3.0;
    double noise_sigma = 1.0;
    std::uint64_t seed = 0;

    void validate() const;
};

struct TaskData {
    int task_number = 0;  // 1-based position in the sequence
    std::vector<Example> train;
    std::vector<Example> test;
};

// Deterministic sequence of classification tasks. All per-task transforms
// are fixed at construction, so make_task(k) is pure.
class TaskStream {
public:
    explicit TaskStream(TaskStreamConfig cfg);

    const TaskStreamConfig& config() const { return cfg_; }

    // task_number in [1, num_tasks]. Labels cycle round-robin over classes;
    // the train/test split is stratified per class (train_fraction train).
    TaskData make_task(int task_number) const;

    // Effective class means for the task (base means after its transform).
    const std::vector<std::vector<double>>& class_means(int task_number) const;

    // Coordinate permutation for the task; PermutedFeatures streams only.
    const std::vector<int>& permutation(int task_number) const;

private:
    void check_task_number(int task_number) const;

    TaskStreamConfig cfg_;
    std::vector<std::vector<double>> base_means_;
    std::vector<std::vector<int>> permutations_;
    std::vector<std::vector<std::vector<double>>> means_;
};

}  // namespace forgecurve
