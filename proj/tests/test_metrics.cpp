#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "forgecurve/metrics.hpp"
#include "forgecurve/rng.hpp"

using namespace forgecurve;

namespace {

EvalMatrix filled(int k, std::uint64_t seed) {
    EvalMatrix m(k);
    auto rng = make_rng(seed, 1);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    for (int j = 1; j <= k; ++j) {
        for (int i = 1; i <= j; ++i) {
            m.set(i, j, dist(rng));
        }
    }
    return m;
}

}  // namespace

TEST_CASE("matrix construction and triangle bounds") {
    CHECK_THROWS_AS(EvalMatrix(0), ConfigError);
    CHECK_THROWS_AS(EvalMatrix(-2), ConfigError);
    CHECK_EQ(EvalMatrix().size(), 0);

    EvalMatrix m(3);
    CHECK_EQ(m.size(), 3);
    CHECK_NOTHROW(m.set(1, 1, 0.5));
    CHECK_NOTHROW(m.set(1, 3, 0.5));
    CHECK_NOTHROW(m.set(3, 3, 0.5));
    CHECK_THROWS_AS(m.set(2, 1, 0.5), StateError);  // above the triangle
    CHECK_THROWS_AS(m.set(0, 1, 0.5), StateError);
    CHECK_THROWS_AS(m.set(1, 4, 0.5), StateError);
    CHECK_THROWS_AS(m.at(2, 1), StateError);
}

TEST_CASE("accuracies must be finite and in the unit interval") {
    EvalMatrix m(2);
    CHECK_THROWS_AS(m.set(1, 1, -0.01), NumericError);
    CHECK_THROWS_AS(m.set(1, 1, 1.01), NumericError);
    CHECK_THROWS_AS(m.set(1, 1, std::nan("")), NumericError);
    CHECK_NOTHROW(m.set(1, 1, 0.0));
    CHECK_NOTHROW(m.set(2, 2, 1.0));
}

TEST_CASE("reading an unset entry is an error, defined() is not") {
    EvalMatrix m(2);
    CHECK_FALSE(m.defined(1, 1));
    CHECK_THROWS_AS(m.at(1, 1), StateError);
    m.set(1, 1, 0.75);
    CHECK(m.defined(1, 1));
    CHECK_EQ(m.at(1, 1), 0.75);
    CHECK_FALSE(m.defined(1, 2));
}

TEST_CASE("overall performance and backward transfer on a hand matrix") {
    // a11=0.9  a12=0.6  a13=0.5
    //          a22=0.8  a23=0.7
    //                   a33=0.95
    EvalMatrix m(3);
    m.set(1, 1, 0.9);
    m.set(1, 2, 0.6);
    m.set(2, 2, 0.8);
    m.set(1, 3, 0.5);
    m.set(2, 3, 0.7);
    m.set(3, 3, 0.95);

    const double op = (0.5 + 0.7 + 0.95) / 3.0;
    const double bwt = ((0.5 - 0.9) + (0.7 - 0.8)) / 2.0;
    CHECK_EQ(overall_performance(m), doctest::Approx(op).epsilon(1e-15));
    CHECK_EQ(backward_transfer(m), doctest::Approx(bwt).epsilon(1e-15));
    CHECK_EQ(backward_transfer(m), doctest::Approx(-0.25).epsilon(1e-15));
}

TEST_CASE("no forgetting means zero backward transfer") {
    EvalMatrix m(3);
    m.set(1, 1, 0.8);
    m.set(1, 2, 0.8);
    m.set(2, 2, 0.6);
    m.set(1, 3, 0.8);
    m.set(2, 3, 0.6);
    m.set(3, 3, 0.9);
    CHECK_EQ(backward_transfer(m), 0.0);
    CHECK_EQ(overall_performance(m), doctest::Approx((0.8 + 0.6 + 0.9) / 3.0)
                                         .epsilon(1e-15));
}

TEST_CASE("single-task runs have no backward transfer") {
    EvalMatrix m(1);
    m.set(1, 1, 0.7);
    CHECK_EQ(overall_performance(m), 0.7);
    CHECK_THROWS_AS(backward_transfer(m), StateError);
    CHECK_THROWS_AS(overall_performance(EvalMatrix()), StateError);
}

TEST_CASE("metrics require the cells they read to be present") {
    EvalMatrix m(2);
    m.set(1, 1, 0.5);
    m.set(2, 2, 0.5);
    CHECK_THROWS_AS(overall_performance(m), StateError);  // a_{1,2} missing
    CHECK_THROWS_AS(backward_transfer(m), StateError);
}

TEST_CASE("backward transfer ignores interior columns") {
    auto m = filled(4, 3);
    auto shifted = m;
    // Rewrite every interior cell (j < K, i < j); BWT reads only the
    // diagonal and the last column so it must not move.
    for (int j = 2; j < 4; ++j) {
        for (int i = 1; i < j; ++i) {
            shifted.set(i, j, 0.123);
        }
    }
    CHECK_EQ(backward_transfer(shifted), backward_transfer(m));
    CHECK_EQ(overall_performance(shifted), overall_performance(m));
}

TEST_CASE("metrics match brute-force recomputation on random matrices") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const int k = 2 + static_cast<int>(seed % 5);
        const auto m = filled(k, seed);
        double op = 0.0;
        for (int i = 1; i <= k; ++i) op += m.at(i, k);
        op /= k;
        double bwt = 0.0;
        for (int i = 1; i < k; ++i) bwt += m.at(i, k) - m.at(i, i);
        bwt /= (k - 1);
        CHECK_EQ(overall_performance(m), doctest::Approx(op).epsilon(1e-15));
        CHECK_EQ(backward_transfer(m), doctest::Approx(bwt).epsilon(1e-15));
        CHECK(backward_transfer(m) >= -1.0);
        CHECK(backward_transfer(m) <= 1.0);
    }
}

TEST_CASE("equality compares contents, not identity") {
    const auto a = filled(3, 9);
    const auto b = filled(3, 9);
    const auto c = filled(3, 10);
    CHECK(a == b);
    CHECK_FALSE(a == c);

    EvalMatrix partial(3);
    partial.set(1, 1, 0.5);
    EvalMatrix partial2(3);
    partial2.set(1, 1, 0.5);
    CHECK(partial == partial2);
    partial2.set(2, 2, 0.5);
    CHECK_FALSE(partial == partial2);
}
