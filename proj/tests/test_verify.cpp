#include <cmath>

#include "doctest.h"
#include "expanse/error.hpp"
#include "expanse/symbolic.hpp"
#include "expanse/torus.hpp"
#include "expanse/verify.hpp"

using namespace expanse;

namespace {

const double kLog2 = std::log(2.0);

GammaSequence full_shift_gamma(int n_max) {
    GammaSequence g(BoundKind::exact, "full 2-shift");
    for (int n = 1; n <= n_max; ++n) g.set(n, std::pow(2.0, -(n / 2)));
    return g;
}

GammaSequence full_shift_delta(int n_max) {
    GammaSequence d(BoundKind::exact, "zero-cylinder cover");
    for (int n = 1; n <= n_max; ++n) d.set(n, std::pow(2.0, -(n - 1)));
    return d;
}

}  // namespace

TEST_SUITE("verify") {

TEST_CASE("symbolic identity with equality at even n_max") {
    const auto rec = symbolic_identity_check({full_shift_gamma(20), 2.0, kLog2, 0.02});
    CHECK(rec.passed());
    CHECK(rec.left == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("symbolic identity refuses bound-kind sequences") {
    auto g = full_shift_gamma(20).scaled(1.0);
    GammaSequence upper(BoundKind::upper, "u");
    for (const auto& [n, v] : g.entries()) upper.set(n, v);
    CHECK(symbolic_identity_check({upper, 2.0, kLog2, 0.02}).status == CheckStatus::inconclusive);
}

TEST_CASE("lebesgue checks on the full shift") {
    const LebesgueInputs in{full_shift_gamma(20), full_shift_delta(20), 0.5, 1.0};
    const auto fin = lebesgue_finite_check(in);
    CHECK(fin.passed());
    const auto rate = lebesgue_rate_check(in);
    CHECK(rate.passed());
    CHECK(rate.left == doctest::Approx(kLog2 / 2.0));

    // Cover too coarse: hypothesis unmet.
    const LebesgueInputs coarse{full_shift_gamma(20), full_shift_delta(20), 1.0, 1.0};
    CHECK(lebesgue_finite_check(coarse).status == CheckStatus::inconclusive);

    // Swapped roles fail.
    const LebesgueInputs swapped{full_shift_delta(20), full_shift_gamma(20), 0.5, 1.0};
    CHECK(lebesgue_finite_check(swapped).status == CheckStatus::fail);
}

TEST_CASE("box dimension check") {
    const auto rec = box_dimension_check({full_shift_gamma(24), 2.0, kLog2});
    CHECK(rec.passed());
    const auto bad = box_dimension_check({full_shift_gamma(24), 1.0, kLog2});
    CHECK(bad.status == CheckStatus::fail);
}

TEST_CASE("lipschitz rate check and direction soundness") {
    const auto ok = lipschitz_rate_check({full_shift_gamma(24), 2.0, 2.0});
    CHECK(ok.passed());
    GammaSequence upper(BoundKind::upper, "u");
    for (int n = 1; n <= 24; ++n) upper.set(n, std::pow(2.0, -(n / 2)));
    const auto inc = lipschitz_rate_check({upper, 2.0, 2.0});
    CHECK(inc.status == CheckStatus::inconclusive);
    // Without the inverse the bound is log L.
    const auto fwd = lipschitz_rate_check({full_shift_gamma(24), 2.0, std::nullopt});
    CHECK(fwd.right >= kLog2);
}

TEST_CASE("cat map torus checks") {
    const ToralAutomorphism cat(IntMatrix({{2, 1}, {1, 1}}));
    const auto b = expansive_bracket(cat, 12, RationalGrid(64), certified_gamma1(cat));
    const TorusInputs in{b.upper, b.lower, entropy(cat), 0.15};
    CHECK(torus_rate_check(in).passed());
    CHECK(torus_bracket_check(in).passed());
    CHECK(box_dimension_check({b.upper, 2.0, entropy(cat)}).passed());
    CHECK(lipschitz_rate_check({b.lower, cat.lipschitz(), cat.inverse_lipschitz()}).passed());
}

TEST_CASE("report assembly") {
    VerifyBundle bundle;
    bundle.system = "full 2-shift";
    bundle.lebesgue = LebesgueInputs{full_shift_gamma(20), full_shift_delta(20), 0.5, 1.0};
    bundle.symbolic_identity = SymbolicIdentityInputs{full_shift_gamma(20), 2.0, kLog2, 0.02};
    bundle.box_dimension = BoxDimensionInputs{full_shift_gamma(20), 2.0, kLog2};
    const auto r1 = verify_report(bundle);
    const auto r2 = verify_report(bundle);
    REQUIRE(r1.checks.size() == 4);
    CHECK(r1.checks[0].name == "lebesgue-finite");
    CHECK(r1.checks[1].name == "lebesgue-rate");
    CHECK(r1.checks[2].name == "box-dimension");
    CHECK(r1.checks[3].name == "symbolic-identity");
    CHECK(r1.all_passed());
    for (std::size_t i = 0; i < r1.checks.size(); ++i) {
        CHECK(r1.checks[i].left == r2.checks[i].left);
        CHECK(r1.checks[i].right == r2.checks[i].right);
        CHECK(r1.checks[i].inputs == r2.checks[i].inputs);
        CHECK_FALSE(r1.checks[i].anchor.empty());
    }

    bundle.requested = {CheckId::torus};
    CHECK_THROWS_AS(verify_report(bundle), InvalidInput);
    bundle.requested = {CheckId::symbolic_identity};
    CHECK(verify_report(bundle).checks.size() == 1);
    CHECK(check_id_from_string("power-scaling") == CheckId::power_scaling);
    CHECK_THROWS_AS(check_id_from_string("nope"), InvalidInput);
}

}  // TEST_SUITE
