#include "forgecurve/memory.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>

namespace forgecurve {

Capacity Capacity::count(long n) {
    if (n < 1) {
        throw ConfigError("memory capacity count must be >= 1");
    }
    return Capacity(false, static_cast<double>(n));
}

Capacity Capacity::fraction(double f) {
    if (!(f > 0.0) || f > 1.0 || !std::isfinite(f)) {
        throw ConfigError("memory capacity fraction must be in (0, 1]");
    }
    return Capacity(true, f);
}

long Capacity::resolve(std::size_t dataset_size) const {
    if (!is_fraction_) {
        return static_cast<long>(value_);
    }
    const long n = static_cast<long>(std::floor(value_ * static_cast<double>(dataset_size)));
    return std::max(1L, n);
}

ReplayBuffer::ReplayBuffer(Capacity capacity_per_task, bool task_balanced)
    : capacity_(capacity_per_task), task_balanced_(task_balanced) {}

bool ReplayBuffer::update_task(int task_id, const std::vector<Example>& dataset,
                               std::uint64_t rng_seed) {
    if (dataset.empty()) {
        throw ShapeError("update_task: dataset is empty");
    }
    const bool replaced = per_task_.count(task_id) > 0;
    if (replaced) {
        std::cerr << "[forgecurve] warning: replay buffer already holds task "
                  << task_id << "; replacing its store\n";
    }
    const std::size_t keep = std::min<std::size_t>(
        static_cast<std::size_t>(capacity_.resolve(dataset.size())), dataset.size());

    std::mt19937_64 rng(rng_seed);
    std::vector<Example> chosen;
    chosen.reserve(keep);
    std::sample(dataset.begin(), dataset.end(), std::back_inserter(chosen), keep, rng);
    for (auto& ex : chosen) {
        ex.task_id = task_id;
    }
    per_task_[task_id] = std::move(chosen);
    return replaced;
}

std::vector<Example> ReplayBuffer::sample_batch(std::size_t batch_size,
                                                std::mt19937_64& rng) const {
    if (empty()) {
        throw StateError("sample_batch: replay buffer is empty");
    }
    std::vector<Example> batch;
    batch.reserve(batch_size);
    if (task_balanced_) {
        std::vector<const std::vector<Example>*> stores;
        for (const auto& [id, store] : per_task_) {
            (void)id;
            if (!store.empty()) stores.push_back(&store);
        }
        std::uniform_int_distribution<std::size_t> pick_task(0, stores.size() - 1);
        for (std::size_t i = 0; i < batch_size; ++i) {
            const auto& store = *stores[pick_task(rng)];
            std::uniform_int_distribution<std::size_t> pick(0, store.size() - 1);
            batch.push_back(store[pick(rng)]);
        }
        return batch;
    }
    std::vector<const Example*> pool;
    pool.reserve(size());
    for (const auto& [id, store] : per_task_) {
        (void)id;
        for (const auto& ex : store) pool.push_back(&ex);
    }
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    for (std::size_t i = 0; i < batch_size; ++i) {
        batch.push_back(*pool[pick(rng)]);
    }
    return batch;
}

std::vector<std::vector<Example>> ReplayBuffer::epoch_batches(
    std::size_t batch_size, std::mt19937_64& rng) const {
    if (empty()) {
        throw StateError("epoch_batches: replay buffer is empty");
    }
    if (batch_size == 0) {
        throw ConfigError("epoch_batches: batch_size must be positive");
    }
    std::vector<const Example*> pool;
    pool.reserve(size());
    for (const auto& [id, store] : per_task_) {
        (void)id;
        for (const auto& ex : store) pool.push_back(&ex);
    }
    std::shuffle(pool.begin(), pool.end(), rng);
    std::vector<std::vector<Example>> batches;
    batches.reserve((pool.size() + batch_size - 1) / batch_size);
    for (std::size_t start = 0; start < pool.size(); start += batch_size) {
        const std::size_t stop = std::min(pool.size(), start + batch_size);
        std::vector<Example> batch;
        batch.reserve(stop - start);
        for (std::size_t i = start; i < stop; ++i) {
            batch.push_back(*pool[i]);
        }
        batches.push_back(std::move(batch));
    }
    return batches;
}

std::size_t ReplayBuffer::size() const {
    std::size_t total = 0;
    for (const auto& [id, store] : per_task_) {
        (void)id;
        total += store.size();
    }
    return total;
}

void ReplayBuffer::dump_csv(std::ostream& out) const {
    out << "task_id,example_index,label\n";
    for (const auto& [id, store] : per_task_) {
        for (std::size_t i = 0; i < store.size(); ++i) {
            out << id << ',' << i << ',' << store[i].label << '\n';
        }
    }
}

}  // namespace forgecurve
