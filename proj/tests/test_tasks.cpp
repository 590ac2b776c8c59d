#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "forgecurve/tasks.hpp"

using namespace forgecurve;

namespace {

TaskStreamConfig small_config(TaskGenerator gen = TaskGenerator::PermutedFeatures) {
    TaskStreamConfig cfg;
    cfg.num_tasks = 3;
    cfg.samples_per_task = 60;
    cfg.num_classes = 4;
    cfg.input_dim = 6;
    cfg.generator = gen;
    cfg.seed = 7;
    return cfg;
}

double l2(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

std::map<int, int> label_counts(const std::vector<Example>& data) {
    std::map<int, int> out;
    for (const auto& ex : data) ++out[ex.label];
    return out;
}

}  // namespace

TEST_CASE("generator names round-trip") {
    CHECK_EQ(task_generator_name(TaskGenerator::PermutedFeatures), "PermutedFeatures");
    CHECK_EQ(task_generator_name(TaskGenerator::RotatedGaussians), "RotatedGaussians");
    CHECK_EQ(task_generator_from_name("PermutedFeatures"),
             TaskGenerator::PermutedFeatures);
    CHECK_EQ(task_generator_from_name("RotatedGaussians"),
             TaskGenerator::RotatedGaussians);
    CHECK_THROWS_AS(task_generator_from_name("Spirals"), ConfigError);
}

TEST_CASE("stream config validation") {
    CHECK_NOTHROW(TaskStreamConfig{}.validate());
    auto bad = small_config();
    bad.num_tasks = 0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = small_config();
    bad.num_classes = 1;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = small_config();
    bad.input_dim = 1;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = small_config();
    bad.samples_per_task = bad.num_classes;  // needs at least 2 per class
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = small_config();
    bad.train_fraction = 1.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = small_config();
    bad.train_fraction = 0.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = small_config();
    bad.mean_scale = 0.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = small_config();
    bad.noise_sigma = -1.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("task numbers outside the sequence are rejected") {
    TaskStream stream(small_config());
    CHECK_THROWS_AS(stream.make_task(0), ConfigError);
    CHECK_THROWS_AS(stream.make_task(4), ConfigError);
    CHECK_THROWS_AS(stream.class_means(-1), ConfigError);
    CHECK_NOTHROW(stream.make_task(1));
    CHECK_NOTHROW(stream.make_task(3));
}

TEST_CASE("task sizes, labels and split fractions") {
    auto cfg = small_config();
    TaskStream stream(cfg);
    for (int k = 1; k <= cfg.num_tasks; ++k) {
        const auto task = stream.make_task(k);
        CHECK_EQ(task.task_number, k);
        CHECK_EQ(task.train.size() + task.test.size(),
                 static_cast<std::size_t>(cfg.samples_per_task));
        for (const auto& ex : task.train) {
            CHECK_EQ(ex.features.size(), static_cast<std::size_t>(cfg.input_dim));
            CHECK(ex.label >= 0);
            CHECK(ex.label < cfg.num_classes);
        }
        // Round-robin labels: 60 samples over 4 classes puts 15 in each,
        // stratified split keeps floor(0.8 * 15) = 12 train, 3 test.
        for (const auto& [label, n] : label_counts(task.train)) CHECK_EQ(n, 12);
        for (const auto& [label, n] : label_counts(task.test)) CHECK_EQ(n, 3);
    }
}

TEST_CASE("stratified split always leaves both sides of every class non-empty") {
    auto cfg = small_config();
    cfg.samples_per_task = 8;  // 2 per class, the minimum
    cfg.train_fraction = 0.9;
    TaskStream stream(cfg);
    const auto task = stream.make_task(1);
    const auto train = label_counts(task.train);
    const auto test = label_counts(task.test);
    for (int c = 0; c < cfg.num_classes; ++c) {
        CHECK_EQ(train.at(c), 1);  // clamped to n_c - 1
        CHECK_EQ(test.at(c), 1);
    }
}

TEST_CASE("base class means have the configured norm and first task uses them") {
    auto cfg = small_config();
    cfg.mean_scale = 2.5;
    TaskStream stream(cfg);
    const auto& means = stream.class_means(1);
    REQUIRE_EQ(means.size(), static_cast<std::size_t>(cfg.num_classes));
    for (const auto& m : means) {
        CHECK_EQ(l2(m), doctest::Approx(2.5).epsilon(1e-12));
    }
}

TEST_CASE("task generation is deterministic and pure") {
    TaskStream a(small_config());
    TaskStream b(small_config());
    const auto t1 = a.make_task(2);
    const auto t2 = a.make_task(2);  // repeated call on the same stream
    const auto t3 = b.make_task(2);  // fresh stream, same seed
    REQUIRE_EQ(t1.train.size(), t2.train.size());
    REQUIRE_EQ(t1.train.size(), t3.train.size());
    for (std::size_t i = 0; i < t1.train.size(); ++i) {
        CHECK_EQ(t1.train[i].features, t2.train[i].features);
        CHECK_EQ(t1.train[i].features, t3.train[i].features);
        CHECK_EQ(t1.train[i].label, t3.train[i].label);
    }
}

TEST_CASE("different seeds give different data") {
    auto cfg = small_config();
    TaskStream a(cfg);
    cfg.seed = 8;
    TaskStream b(cfg);
    const auto ta = a.make_task(1);
    const auto tb = b.make_task(1);
    CHECK_NE(ta.train[0].features, tb.train[0].features);
}

TEST_CASE("tasks are generated independently of visit order") {
    TaskStream stream(small_config());
    const auto late_first = stream.make_task(3);
    const auto early = stream.make_task(1);
    const auto late_again = stream.make_task(3);
    for (std::size_t i = 0; i < late_first.train.size(); ++i) {
        CHECK_EQ(late_first.train[i].features, late_again.train[i].features);
    }
    CHECK_EQ(early.task_number, 1);
}

TEST_CASE("permuted streams use the identity for task one and distinct shuffles after") {
    auto cfg = small_config();
    TaskStream stream(cfg);
    std::vector<int> identity(static_cast<std::size_t>(cfg.input_dim));
    std::iota(identity.begin(), identity.end(), 0);
    CHECK_EQ(stream.permutation(1), identity);

    std::set<std::vector<int>> seen;
    for (int k = 1; k <= cfg.num_tasks; ++k) {
        const auto& perm = stream.permutation(k);
        auto sorted = perm;
        std::sort(sorted.begin(), sorted.end());
        CHECK_EQ(sorted, identity);  // a real permutation of 0..d-1
        CHECK(seen.insert(perm).second);  // all distinct
    }
}

TEST_CASE("permuted task means are coordinate shuffles of the base means") {
    auto cfg = small_config();
    TaskStream stream(cfg);
    const auto& base = stream.class_means(1);
    for (int k = 2; k <= cfg.num_tasks; ++k) {
        const auto& perm = stream.permutation(k);
        const auto& means = stream.class_means(k);
        for (int c = 0; c < cfg.num_classes; ++c) {
            for (int i = 0; i < cfg.input_dim; ++i) {
                CHECK_EQ(means[static_cast<std::size_t>(c)][static_cast<std::size_t>(i)],
                         base[static_cast<std::size_t>(c)]
                             [static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])]);
            }
        }
    }
}

TEST_CASE("rotated streams preserve mean norms and change directions") {
    auto cfg = small_config(TaskGenerator::RotatedGaussians);
    TaskStream stream(cfg);
    const auto& base = stream.class_means(1);
    CHECK_THROWS_AS(stream.permutation(1), StateError);  // no permutations here
    for (int k = 2; k <= cfg.num_tasks; ++k) {
        const auto& means = stream.class_means(k);
        bool moved = false;
        for (int c = 0; c < cfg.num_classes; ++c) {
            const auto& m = means[static_cast<std::size_t>(c)];
            const auto& b = base[static_cast<std::size_t>(c)];
            CHECK_EQ(l2(m), doctest::Approx(l2(b)).epsilon(1e-9));
            for (std::size_t i = 0; i < m.size(); ++i) {
                if (std::abs(m[i] - b[i]) > 1e-6) moved = true;
            }
        }
        CHECK(moved);
    }
}

TEST_CASE("samples cluster around their task's class means") {
    auto cfg = small_config();
    cfg.samples_per_task = 400;
    cfg.noise_sigma = 0.05;  // tight clusters make the check sharp
    TaskStream stream(cfg);
    for (int k = 1; k <= cfg.num_tasks; ++k) {
        const auto task = stream.make_task(k);
        const auto& means = stream.class_means(k);
        std::vector<std::vector<double>> sum(
            static_cast<std::size_t>(cfg.num_classes),
            std::vector<double>(static_cast<std::size_t>(cfg.input_dim), 0.0));
        std::vector<int> n(static_cast<std::size_t>(cfg.num_classes), 0);
        auto tally = [&](const std::vector<Example>& part) {
            for (const auto& ex : part) {
                ++n[static_cast<std::size_t>(ex.label)];
                for (std::size_t i = 0; i < ex.features.size(); ++i) {
                    sum[static_cast<std::size_t>(ex.label)][i] += ex.features[i];
                }
            }
        };
        tally(task.train);
        tally(task.test);
        for (int c = 0; c < cfg.num_classes; ++c) {
            const auto& m = means[static_cast<std::size_t>(c)];
            for (std::size_t i = 0; i < m.size(); ++i) {
                const double avg = sum[static_cast<std::size_t>(c)][i] /
                                   n[static_cast<std::size_t>(c)];
                // Standard error of the class mean is sigma / sqrt(100) = 0.005,
                // so a 0.05 band is a ten-sigma cushion.
                CHECK(std::abs(avg - m[i]) < 0.05);
            }
        }
    }
}

TEST_CASE("zero noise puts samples exactly on the class means") {
    auto cfg = small_config();
    cfg.noise_sigma = 0.0;
    TaskStream stream(cfg);
    const auto task = stream.make_task(2);
    const auto& means = stream.class_means(2);
    for (const auto& ex : task.train) {
        CHECK_EQ(ex.features, means[static_cast<std::size_t>(ex.label)]);
    }
}
