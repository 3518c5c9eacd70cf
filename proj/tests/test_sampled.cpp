#include <cmath>
#include <numbers>

#include "doctest.h"
#include "expanse/error.hpp"
#include "expanse/sampled.hpp"
#include "expanse/samplers.hpp"
#include "expanse/symbolic.hpp"
#include "expanse/torus.hpp"
#include "oracles.hpp"

using namespace expanse;

namespace {

ToralAutomorphism cat_map() { return ToralAutomorphism(IntMatrix({{2, 1}, {1, 1}})); }

}  // namespace

TEST_SUITE("sampled") {

TEST_CASE("bowen distance on small systems") {
    const auto swap = two_point_system(1.0, true);
    CHECK(bowen_distance(swap, 0, 0, 5) == 0.0);
    CHECK(bowen_distance(swap, 0, 1, 1) == swap.dist(0, 1));
    CHECK(bowen_distance(swap, 0, 1, 3) == 1.0);
    CHECK_THROWS_AS(bowen_distance(swap, 0, 2, 1), InvalidInput);
    CHECK_THROWS_AS(bowen_distance(swap, 0, 1, 0), InvalidInput);

    const auto circle = circle_grid(16, 3);
    for (PointIndex y = 1; y < 16; ++y) {
        double prev = 0.0;
        for (int n = 1; n <= 8; ++n) {
            const double d = bowen_distance(circle, 0, y, n);
            CHECK(d >= prev);
            prev = d;
        }
    }
}

TEST_CASE("expansive constant estimate") {
    CHECK(expansive_constant_estimate(two_point_system(1.0, true), 1, 4) == 1.0);
    CHECK(expansive_constant_estimate(two_point_system(1.0, false), 1, 10) == 1.0);

    const auto grid2 = rational_grid_system(cat_map(), RationalGrid(2));
    CHECK(expansive_constant_estimate(grid2, 3, 8) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(expansive_constant_estimate(grid2, 3, 8) ==
          doctest::Approx(gamma_upper_bound(cat_map(), 3, RationalGrid(2))));

    CHECK_THROWS_AS(expansive_constant_estimate(circle_grid(1), 1, 2), InvalidInput);
}

TEST_CASE("expansive estimate matches exhaustive pair scan and ignores worker count") {
    const auto sys = rational_grid_system(cat_map(), RationalGrid(6));
    for (int n = 1; n <= 3; ++n) {
        const int horizon = 6;
        double brute = 1e9;
        for (PointIndex x = 0; x < sys.size(); ++x) {
            for (PointIndex y = x + 1; y < sys.size(); ++y) {
                double worst = 0.0;
                for (int k = -horizon; k <= horizon; ++k) {
                    const auto p = sys.power(static_cast<long>(k) * n);
                    worst = std::max(worst, sys.dist(p[x], p[y]));
                }
                brute = std::min(brute, worst);
            }
        }
        const double one = expansive_constant_estimate(sys, n, horizon, Parallelism{1});
        const double four = expansive_constant_estimate(sys, n, horizon, Parallelism{4});
        CHECK(one == brute);
        CHECK(four == one);
    }
}

TEST_CASE("lipschitz constant estimate") {
    CHECK(lipschitz_constant_estimate(circle_grid(12, 0)) == doctest::Approx(1.0));
    CHECK(lipschitz_constant_estimate(two_point_system(1.0, true)) == 1.0);
    const double lambda = (3.0 + std::sqrt(5.0)) / 2.0;
    const double l5 = lipschitz_constant_estimate(rational_grid_system(cat_map(), RationalGrid(5)));
    CHECK(l5 >= 1.0);
    CHECK(l5 <= lambda + 1e-12);
}

TEST_CASE("lipschitz estimate rejects coincident distinct points") {
    // Pseudometric table: zero off the diagonal is refused by the estimator.
    const FiniteSampledSystem sys(3, {0, 0, 1, 0, 0, 1, 1, 1, 0}, {1, 0, 2});
    CHECK_THROWS_AS(lipschitz_constant_estimate(sys), InvalidInput);
}

TEST_CASE("lebesgue numbers") {
    const auto circle = circle_grid(8);
    std::vector<std::vector<PointIndex>> whole(1);
    for (PointIndex i = 0; i < 8; ++i) whole[0].push_back(i);
    const auto unbounded = lebesgue_sequence(circle, OpenCoverSpec(whole), 1);
    CHECK(std::isinf(unbounded.at(0)));

    const auto pair = two_point_system(1.0, false);
    const auto delta = lebesgue_sequence(pair, OpenCoverSpec({{0}, {1}}), 1);
    CHECK(delta.at(0) == 1.0);
}

TEST_CASE("lebesgue numbers of the zero-cylinder cover on a periodic full-shift sample") {
    const SymbolicSpace space(TransitionMatrix::full_shift(2), 2.0, Sidedness::two_sided);
    std::vector<std::vector<Symbol>> words;
    const auto sys = periodic_orbit_sample(space, 8, &words);
    const auto delta = lebesgue_sequence(sys, zero_cylinder_cover(words), 4);
    for (int n = 1; n <= 4; ++n) {
        CHECK(delta[n - 1] == doctest::Approx(std::pow(2.0, -(n - 1))).epsilon(1e-15));
        CHECK(delta[n - 1] == cylinder_lebesgue_exact(space, n).value);
    }
}

TEST_CASE("cover validation") {
    const auto circle = circle_grid(4);
    CHECK_THROWS_AS(OpenCoverSpec({}), InvalidInput);
    CHECK_THROWS_AS(OpenCoverSpec({{0}, {}}), InvalidInput);
    CHECK_THROWS_AS(OpenCoverSpec({{0, 1}, {2}}).validate_for(circle), InvalidInput);
    CHECK_THROWS_AS(OpenCoverSpec({{0, 1}, {2, 3, 9}}).validate_for(circle), InvalidInput);
    CHECK_NOTHROW(OpenCoverSpec({{0, 1}, {1, 2, 3}}).validate_for(circle));
}

TEST_CASE("system validation") {
    CHECK_THROWS_AS(FiniteSampledSystem(2, {0, 1, 2, 0}, {0, 1}), InvalidInput);
    CHECK_THROWS_AS(FiniteSampledSystem(2, {1, 1, 1, 0}, {0, 1}), InvalidInput);
    CHECK_THROWS_AS(FiniteSampledSystem(2, {0, 1, 1, 0}, {0, 2}), InvalidInput);
    CHECK_THROWS_AS(FiniteSampledSystem(2, {0, 1, 1, 0}, {0, 1}, std::vector<PointIndex>{1, 0}), InvalidInput);
    const FiniteSampledSystem folded(2, {0, 1, 1, 0}, {0, 0});
    CHECK_FALSE(folded.invertible());
    CHECK(circle_grid(5, 2).invertible());
}

TEST_CASE("box dimension of a circle grid") {
    const auto circle = circle_grid(256);
    const std::vector<double> scales{0.25, 0.125, 0.0625, 0.03125, 0.015625};
    const auto est = box_dimension_estimate(circle, scales);
    for (std::size_t i = 0; i < scales.size(); ++i) {
        const auto oracle_count = oracle::greedy_cover(256, scales[i], [&](std::size_t a, std::size_t b) {
            return circle.dist(static_cast<PointIndex>(a), static_cast<PointIndex>(b));
        });
        CHECK(est.covering_counts[i] == oracle_count);
    }
    CHECK(est.slope_lower >= 0.9);
    CHECK(est.slope_upper <= 1.1);
    CHECK(est.slope_lower <= est.slope_upper);
}

TEST_CASE("box dimension of a torus grid") {
    const auto grid = rational_grid_system(cat_map(), RationalGrid(64));
    const std::vector<double> scales{0.5, 0.25, 0.125, 0.0625};
    const auto est = box_dimension_estimate(grid, scales, Parallelism{4});
    CHECK(est.slope_lower >= 1.8);
    CHECK(est.slope_upper <= 2.2);
    for (std::size_t i = 1; i < est.covering_counts.size(); ++i) {
        CHECK(est.covering_counts[i] >= est.covering_counts[i - 1]);
    }
}

TEST_CASE("box dimension input errors") {
    const std::vector<double> scales{0.5, 0.25};
    CHECK_THROWS_WITH_AS(box_dimension_estimate(circle_grid(1), scales), doctest::Contains("scale list unusable"),
                         InvalidInput);
    const std::vector<double> one{0.25};
    CHECK_THROWS_AS(box_dimension_estimate(circle_grid(64), one), InvalidInput);
    const std::vector<double> ascending{0.1, 0.2};
    CHECK_THROWS_AS(box_dimension_estimate(circle_grid(64), ascending), InvalidInput);
    const std::vector<double> too_fine{0.25, 0.001};
    CHECK_THROWS_AS(box_dimension_estimate(circle_grid(64), too_fine), InvalidInput);
}

}  // TEST_SUITE
