#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <random>
#include <vector>

#include "forgecurve/errors.hpp"

namespace forgecurve {

struct Example {
    std::vector<double> features;
    int label = 0;
    int task_id = 0;
};

// Per-task exemplar budget: either an absolute count or a fraction of the
// task's dataset, resolved at insert time as floor(fraction * n), minimum 1.
class Capacity {
public:
    static Capacity count(long n);
    static Capacity fraction(double f);

    long resolve(std::size_t dataset_size) const;
    bool is_fraction() const { return is_fraction_; }
    double raw() const { return value_; }

private:
    Capacity(bool is_fraction, double value) : is_fraction_(is_fraction), value_(value) {}
    bool is_fraction_ = true;
    double value_ = 0.02;
};

// Capped per-task exemplar stores forming the global replay memory. One task
// is inserted once, after it finishes training; re-inserting a task id
// replaces its store and logs a warning (it signals harness misuse).
class ReplayBuffer {
public:
    explicit ReplayBuffer(Capacity capacity_per_task, bool task_balanced = false);

    // Stores min(capacity, |dataset|) examples drawn uniformly without
    // replacement, deterministically under rng_seed. Returns true if the
    // task id was already present (store replaced).
    bool update_task(int task_id, const std::vector<Example>& dataset,
                     std::uint64_t rng_seed);

    // batch_size examples drawn with replacement. Pooled-uniform over all
    // stored examples by default; task-balanced picks a task first.
    std::vector<Example> sample_batch(std::size_t batch_size, std::mt19937_64& rng) const;

    // One shuffled pass over every stored example, chunked into batches;
    // the last batch may be short.
    std::vector<std::vector<Example>> epoch_batches(std::size_t batch_size,
                                                    std::mt19937_64& rng) const;

    std::size_t size() const;
    bool empty() const { return size() == 0; }
    const std::map<int, std::vector<Example>>& per_task() const { return per_task_; }

    // Audit dump: header `task_id,example_index,label`, one row per example.
    void dump_csv(std::ostream& out) const;

private:
    Capacity capacity_;
    bool task_balanced_;
    std::map<int, std::vector<Example>> per_task_;
};

}  // namespace forgecurve
