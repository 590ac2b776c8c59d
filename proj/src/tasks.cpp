#include "forgecurve/tasks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "forgecurve/rng.hpp"

namespace forgecurve {

std::string task_generator_name(TaskGenerator gen) {
    switch (gen) {
        case TaskGenerator::PermutedFeatures: return "PermutedFeatures";
        case TaskGenerator::RotatedGaussians: return "RotatedGaussians";
    }
    throw ConfigError("unknown task generator");
}

TaskGenerator task_generator_from_name(const std::string& name) {
    if (name == "PermutedFeatures") return TaskGenerator::PermutedFeatures;
    if (name == "RotatedGaussians") return TaskGenerator::RotatedGaussians;
    throw ConfigError("unknown task generator '" + name + "'");
}

void TaskStreamConfig::validate() const {
    if (num_tasks < 1) throw ConfigError("num_tasks must be >= 1");
    if (num_classes < 2) throw ConfigError("num_classes must be >= 2");
    if (input_dim < 2) throw ConfigError("input_dim must be >= 2");
    if (samples_per_task < 2 * num_classes) {
        throw ConfigError("samples_per_task must be >= 2 * num_classes so the "
                          "stratified split leaves every class non-empty");
    }
    if (!(train_fraction > 0.0) || !(train_fraction < 1.0)) {
        throw ConfigError("train_fraction must lie in (0, 1)");
    }
    if (!std::isfinite(mean_scale) || mean_scale <= 0.0) {
        throw ConfigError("mean_scale must be finite and positive");
    }
    if (!std::isfinite(noise_sigma) || noise_sigma < 0.0) {
        throw ConfigError("noise_sigma must be finite and >= 0");
    }
}

namespace {

constexpr std::uint64_t kBaseMeansTag = 100;
constexpr std::uint64_t kTaskDataTag = 10000;
constexpr std::uint64_t kPermutationTag = 20000;
constexpr std::uint64_t kRotationTag = 30000;

bool means_distinct(const std::vector<std::vector<double>>& a,
                    const std::vector<std::vector<double>>& b) {
    for (std::size_t c = 0; c < a.size(); ++c) {
        for (std::size_t i = 0; i < a[c].size(); ++i) {
            if (std::abs(a[c][i] - b[c][i]) > 1e-6) return true;
        }
    }
    return false;
}

}  // namespace

TaskStream::TaskStream(TaskStreamConfig cfg) : cfg_(cfg) {
    cfg_.validate();
    const int d = cfg_.input_dim;
    const int C = cfg_.num_classes;
    const int K = cfg_.num_tasks;

    // Base class means: random directions scaled to a fixed norm.
    auto rng = make_rng(cfg_.seed, kBaseMeansTag);
    std::normal_distribution<double> gauss(0.0, 1.0);
    base_means_.assign(static_cast<std::size_t>(C), std::vector<double>(d, 0.0));
    for (auto& mean : base_means_) {
        double norm = 0.0;
        do {
            norm = 0.0;
            for (double& v : mean) {
                v = gauss(rng);
                norm += v * v;
            }
            norm = std::sqrt(norm);
        } while (norm < 1e-9);
        for (double& v : mean) {
            v *= cfg_.mean_scale / norm;
        }
    }

    means_.resize(static_cast<std::size_t>(K));
    if (cfg_.generator == TaskGenerator::PermutedFeatures) {
        permutations_.resize(static_cast<std::size_t>(K));
        std::vector<int> identity(static_cast<std::size_t>(d));
        std::iota(identity.begin(), identity.end(), 0);
        permutations_[0] = identity;
        for (int k = 2; k <= K; ++k) {
            auto prng = make_rng(cfg_.seed, kPermutationTag + static_cast<std::uint64_t>(k));
            std::vector<int> perm = identity;
            // Reshuffle until this task's permutation differs from all before it.
            bool fresh = false;
            while (!fresh) {
                std::shuffle(perm.begin(), perm.end(), prng);
                fresh = true;
                for (int j = 1; j < k; ++j) {
                    if (perm == permutations_[static_cast<std::size_t>(j - 1)]) {
                        fresh = false;
                        break;
                    }
                }
            }
            permutations_[static_cast<std::size_t>(k - 1)] = std::move(perm);
        }
        for (int k = 1; k <= K; ++k) {
            const auto& perm = permutations_[static_cast<std::size_t>(k - 1)];
            auto& task_means = means_[static_cast<std::size_t>(k - 1)];
            task_means.assign(static_cast<std::size_t>(C), std::vector<double>(d, 0.0));
            for (int c = 0; c < C; ++c) {
                for (int i = 0; i < d; ++i) {
                    task_means[static_cast<std::size_t>(c)][static_cast<std::size_t>(i)] =
                        base_means_[static_cast<std::size_t>(c)][static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];
                }
            }
        }
    } else {
        means_[0] = base_means_;
        for (int k = 2; k <= K; ++k) {
            auto arng = make_rng(cfg_.seed, kRotationTag + static_cast<std::uint64_t>(k));
            // Angles bounded away from 0 and 2*pi so the rotation is never
            // the identity; redraw on the (measure-zero) mean collision.
            std::uniform_real_distribution<double> angle(0.25, 2.0 * std::numbers::pi - 0.25);
            auto& task_means = means_[static_cast<std::size_t>(k - 1)];
            do {
                task_means = base_means_;
                for (int i = 0; i + 1 < d; i += 2) {
                    const double theta = angle(arng);
                    const double c = std::cos(theta);
                    const double s = std::sin(theta);
                    for (auto& mean : task_means) {
                        const double a = mean[static_cast<std::size_t>(i)];
                        const double b = mean[static_cast<std::size_t>(i + 1)];
                        mean[static_cast<std::size_t>(i)] = c * a - s * b;
                        mean[static_cast<std::size_t>(i + 1)] = s * a + c * b;
                    }
                }
            } while ([&] {
                for (int j = 1; j < k; ++j) {
                    if (!means_distinct(task_means, means_[static_cast<std::size_t>(j - 1)])) {
                        return true;
                    }
                }
                return false;
            }());
        }
    }
}

void TaskStream::check_task_number(int task_number) const {
    if (task_number < 1 || task_number > cfg_.num_tasks) {
        throw ConfigError("task_number " + std::to_string(task_number) +
                          " outside [1, " + std::to_string(cfg_.num_tasks) + "]");
    }
}

const std::vector<std::vector<double>>& TaskStream::class_means(int task_number) const {
    check_task_number(task_number);
    return means_[static_cast<std::size_t>(task_number - 1)];
}

const std::vector<int>& TaskStream::permutation(int task_number) const {
    if (cfg_.generator != TaskGenerator::PermutedFeatures) {
        throw StateError("permutation() is only meaningful for PermutedFeatures streams");
    }
    check_task_number(task_number);
    return permutations_[static_cast<std::size_t>(task_number - 1)];
}

TaskData TaskStream::make_task(int task_number) const {
    check_task_number(task_number);
    const int N = cfg_.samples_per_task;
    const int C = cfg_.num_classes;
    const int d = cfg_.input_dim;
    const auto& task_means = means_[static_cast<std::size_t>(task_number - 1)];

    auto rng = make_rng(cfg_.seed, kTaskDataTag + static_cast<std::uint64_t>(task_number));
    std::normal_distribution<double> noise(0.0, 1.0);

    std::vector<Example> all(static_cast<std::size_t>(N));
    for (int i = 0; i < N; ++i) {
        Example& ex = all[static_cast<std::size_t>(i)];
        ex.label = i % C;
        ex.task_id = task_number;
        ex.features.resize(static_cast<std::size_t>(d));
        const auto& mean = task_means[static_cast<std::size_t>(ex.label)];
        for (int j = 0; j < d; ++j) {
            ex.features[static_cast<std::size_t>(j)] =
                mean[static_cast<std::size_t>(j)] + cfg_.noise_sigma * noise(rng);
        }
    }

    // Stratified split: per class, shuffle indices and cut at train_fraction,
    // keeping at least one example on each side.
    TaskData data;
    data.task_number = task_number;
    for (int c = 0; c < C; ++c) {
        std::vector<int> idx;
        for (int i = c; i < N; i += C) {
            idx.push_back(i);
        }
        std::shuffle(idx.begin(), idx.end(), rng);
        const int n_c = static_cast<int>(idx.size());
        int n_train = static_cast<int>(std::floor(cfg_.train_fraction * n_c));
        n_train = std::clamp(n_train, 1, n_c - 1);
        for (int i = 0; i < n_c; ++i) {
            auto& dst = i < n_train ? data.train : data.test;
            dst.push_back(all[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])]);
        }
    }
    return data;
}

}  // namespace forgecurve
