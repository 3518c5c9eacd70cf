// Randomized invariants with fixed seeds.

#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "expanse/decay.hpp"
#include "expanse/sampled.hpp"
#include "expanse/symbolic.hpp"
#include "expanse/torus.hpp"
#include "oracles.hpp"

using namespace expanse;

namespace {

// Random metric sample: points on a line or circle with a random self-map.
FiniteSampledSystem random_system(std::mt19937_64& rng, bool bijective) {
    std::uniform_int_distribution<int> size(3, 9);
    const int n = size(rng);
    std::uniform_real_distribution<double> coord(0.0, 1.0);
    std::vector<double> x(n);
    for (auto& v : x) v = coord(rng);
    std::sort(x.begin(), x.end());
    for (int i = 1; i < n; ++i) x[i] = std::max(x[i], x[i - 1] + 1e-3);
    std::vector<PointIndex> map(n);
    if (bijective) {
        std::iota(map.begin(), map.end(), 0);
        std::shuffle(map.begin(), map.end(), rng);
    } else {
        std::uniform_int_distribution<int> pick(0, n - 1);
        for (auto& m : map) m = static_cast<PointIndex>(pick(rng));
    }
    return FiniteSampledSystem::from_metric(
        n, [&](PointIndex a, PointIndex b) { return std::abs(x[a] - x[b]); }, std::move(map));
}

OpenCoverSpec random_cover(std::mt19937_64& rng, std::size_t n) {
    std::uniform_int_distribution<int> parts(1, 3);
    const int k = parts(rng);
    std::uniform_int_distribution<int> label(0, k - 1);
    std::vector<std::vector<PointIndex>> elems(k + 1);
    for (PointIndex i = 0; i < n; ++i) elems[label(rng)].push_back(i);
    elems[k].push_back(0);  // guarantees a nonempty element
    std::erase_if(elems, [](const auto& e) { return e.empty(); });
    return OpenCoverSpec(elems);
}

}  // namespace

TEST_SUITE("properties") {

TEST_CASE("bowen distance is nondecreasing in n") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 40; ++trial) {
        const auto sys = random_system(rng, trial % 2 == 0);
        for (PointIndex a = 0; a < sys.size(); ++a) {
            for (PointIndex b = 0; b < sys.size(); ++b) {
                CHECK(bowen_distance(sys, a, b, 1) == sys.dist(a, b));
                for (int n = 1; n < 6; ++n) CHECK(bowen_distance(sys, a, b, n) <= bowen_distance(sys, a, b, n + 1));
            }
        }
    }
}

TEST_CASE("expansive estimate is nondecreasing in the horizon") {
    // More times in the max can only raise each pair's value.
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 40; ++trial) {
        const auto sys = random_system(rng, trial % 2 == 0);
        for (int n = 1; n <= 3; ++n) {
            double prev = 0.0;
            for (int k = 0; k <= 6; ++k) {
                const double v = expansive_constant_estimate(sys, n, k);
                CHECK(v >= prev);
                prev = v;
                CHECK(expansive_constant_estimate(sys, n, k, Parallelism{3}) == v);
            }
        }
    }
}

TEST_CASE("lebesgue numbers shrink with n and under refinement") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 60; ++trial) {
        const auto sys = random_system(rng, trial % 3 != 0);
        const auto cover = random_cover(rng, sys.size());
        const auto delta = lebesgue_sequence(sys, cover, 6);
        for (std::size_t i = 1; i < delta.size(); ++i) CHECK(delta[i] <= delta[i - 1]);

        // Splitting every element in two refines the cover.
        std::vector<std::vector<PointIndex>> finer;
        for (const auto& e : cover.elements()) {
            const auto half = e.size() / 2;
            if (half == 0) {
                finer.push_back(e);
                continue;
            }
            finer.emplace_back(e.begin(), e.begin() + half);
            finer.emplace_back(e.begin() + half, e.end());
        }
        const auto fine = lebesgue_sequence(sys, OpenCoverSpec(finer), 6);
        for (std::size_t i = 0; i < delta.size(); ++i) CHECK(fine[i] <= delta[i]);
    }
}

TEST_CASE("exact constants: caps, monotonicity, lebesgue domination, witnesses") {
    std::mt19937_64 rng(14);
    for (int trial = 0; trial < 30; ++trial) {
        std::uniform_int_distribution<int> symbols(2, 3);
        const auto a = oracle::random_matrix(rng, symbols(rng));
        for (auto sided : {Sidedness::two_sided, Sidedness::one_sided}) {
            const SymbolicSpace sp(TransitionMatrix(a), trial % 2 ? 2.0 : 3.0, sided);
            const double h = entropy(sp.matrix).value;
            double prev = INFINITY;
            for (int n = 1; n <= 9; ++n) {
                const auto g = exact_expansive_constant(sp, n);
                CAPTURE(n);
                if (g.vacuous) continue;
                CHECK(g.exponent <= (sided == Sidedness::two_sided ? n / 2 : n - 1));
                CHECK(g.value <= prev);
                prev = g.value;
                REQUIRE(g.witness);
                CHECK(verify_pair_witness(sp, n, *g.witness, g.exponent));
                if (h > 1e-9) CHECK(g.value >= cylinder_lebesgue_exact(sp, n).value);
            }
        }
    }
}

TEST_CASE("relabeling leaves every exact value unchanged") {
    std::mt19937_64 rng(15);
    for (int trial = 0; trial < 20; ++trial) {
        const auto a = oracle::random_matrix(rng, 3);
        std::vector<int> perm{0, 1, 2};
        std::shuffle(perm.begin(), perm.end(), rng);
        const TransitionMatrix m(a);
        const auto r = m.relabeled(perm);
        CHECK(entropy(m).value == doctest::Approx(entropy(r).value).epsilon(1e-13));
        for (int n = 1; n <= 6; ++n) {
            const auto g1 = exact_expansive_constant(SymbolicSpace(m, 2, Sidedness::two_sided), n);
            const auto g2 = exact_expansive_constant(SymbolicSpace(r, 2, Sidedness::two_sided), n);
            CHECK(g1.value == g2.value);
            CHECK(g1.vacuous == g2.vacuous);
        }
    }
}

TEST_CASE("decay estimate: scale equivariance and antitonicity") {
    std::mt19937_64 rng(16);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    std::uniform_real_distribution<double> scale(0.1, 10.0);
    for (int trial = 0; trial < 50; ++trial) {
        GammaSequence a(BoundKind::exact, "a"), b(BoundKind::exact, "b");
        double v = 1.0;
        for (int n = 1; n <= 16; ++n) {
            v *= u(rng);
            a.set(n, v);
            b.set(n, v * (1.0 + u(rng)));  // b >= a pointwise
        }
        const double c = scale(rng);
        const auto ea = decay_estimate(a);
        const auto es = decay_estimate(a.scaled(c));
        for (const auto& [n, r] : ea.rate_points) {
            CHECK(es.rate_points.at(n) == doctest::Approx(r - std::log(c) / n).epsilon(1e-10));
        }
        CHECK(es.regression_slope == doctest::Approx(ea.regression_slope).epsilon(1e-9));
        const auto eb = decay_estimate(b);
        for (const auto& [n, r] : ea.rate_points) CHECK(r >= eb.rate_points.at(n));
        CHECK(ea.liminf_rate >= eb.liminf_rate);
        CHECK(ea.limsup_rate >= eb.limsup_rate);
    }
}

TEST_CASE("torus brackets stay sound on random hyperbolic matrices") {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> entry(-3, 3);
    int tested = 0;
    while (tested < 12) {
        const IntMatrix m({{entry(rng), entry(rng)}, {entry(rng), entry(rng)}});
        if (!validate(m).valid()) continue;
        ++tested;
        const ToralAutomorphism t(m);
        const double g1 = certified_gamma1(t);
        CHECK(g1 <= gamma_upper_bound(t, 1, RationalGrid(128)));
        const auto b = expansive_bracket(t, 6, RationalGrid(16), g1);
        for (const auto& [n, lo] : b.lower.entries()) CHECK(lo <= b.upper.at(n));
        // Fixed points found by lattice reduction lie on the grid of their denominator.
        for (int n = 2; n <= 4; ++n) {
            if (auto fp = gamma_upper_bound_fixed_points(t, n)) CHECK(*fp > 0.0);
        }
    }
}

}  // TEST_SUITE
