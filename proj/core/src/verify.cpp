#include "expanse/verify.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>

#include "expanse/error.hpp"
#include "expanse/lipschitz.hpp"

namespace expanse {

namespace {

// How a derived quantity relates to its true value.
enum class Bias { exact, under, over };

Bias value_bias(BoundKind k) {
    if (k == BoundKind::upper) return Bias::over;
    if (k == BoundKind::lower) return Bias::under;
    return Bias::exact;
}

// Larger gamma means smaller decay rate.
Bias rate_bias(BoundKind k) {
    if (k == BoundKind::upper) return Bias::under;
    if (k == BoundKind::lower) return Bias::over;
    return Bias::exact;
}

// Status of "left <= right" given how each side may be off.
CheckStatus resolve_le(bool holds, Bias left, Bias right, std::vector<std::string>& caveats) {
    const bool pass_sound = left != Bias::under && right != Bias::over;
    const bool fail_sound = left != Bias::over && right != Bias::under;
    if (holds && pass_sound) return CheckStatus::pass;
    if (!holds && fail_sound) return CheckStatus::fail;
    caveats.emplace_back(holds ? "holds for the bounds, but their direction cannot certify the inequality"
                               : "fails for the bounds, but their direction cannot refute the inequality");
    return CheckStatus::inconclusive;
}

std::string num(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 12);
    (void)ec;
    return std::string(buf.data(), end);
}

std::string summarize(const GammaSequence& s) {
    return s.source() + " (" + std::string(to_string(s.kind())) + ", " + std::to_string(s.size()) + " entries)";
}

void note_estimate(const GammaSequence& s, std::vector<std::string>& caveats) {
    if (s.kind() == BoundKind::estimate) {
        caveats.emplace_back(s.source() + ": sampled estimate treated as exact, no rigorous direction");
    }
}

void append(std::vector<std::string>& to, const std::vector<std::string>& from) {
    to.insert(to.end(), from.begin(), from.end());
}

}  // namespace

std::string_view to_string(CheckId id) noexcept {
    switch (id) {
        case CheckId::lebesgue: return "lebesgue";
        case CheckId::box_dimension: return "box-dimension";
        case CheckId::symbolic_identity: return "symbolic-identity";
        case CheckId::lipschitz_rate: return "lipschitz-rate";
        case CheckId::torus: return "torus";
        case CheckId::power_scaling: return "power-scaling";
    }
    return "lebesgue";
}

CheckId check_id_from_string(std::string_view name) {
    for (auto id : {CheckId::lebesgue, CheckId::box_dimension, CheckId::symbolic_identity,
                    CheckId::lipschitz_rate, CheckId::torus, CheckId::power_scaling}) {
        if (to_string(id) == name) return id;
    }
    throw InvalidInput("unknown check '" + std::string(name) + "'", "checks");
}

bool VerificationReport::all_passed() const noexcept {
    return std::all_of(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.passed(); });
}

std::vector<std::string> VerificationReport::failing() const {
    std::vector<std::string> out;
    for (const auto& c : checks) {
        if (!c.passed()) out.push_back(c.name);
    }
    return out;
}

CheckRecord lebesgue_finite_check(const LebesgueInputs& in) {
    CheckRecord rec;
    rec.name = "lebesgue-finite";
    rec.anchor = "expansive constant dominates refined Lebesgue number";
    rec.inequality = "gamma(f^n) >= delta_n for every shared n";

    // Worst n: smallest log(gamma) - log(delta).
    double worst = std::numeric_limits<double>::infinity();
    int worst_n = 0;
    int shared = 0;
    for (const auto& [n, g] : in.gamma.entries()) {
        if (!in.delta.contains(n)) continue;
        ++shared;
        const double d = in.delta.at(n);
        double margin;
        if (std::isinf(g)) {
            margin = std::numeric_limits<double>::infinity();
        } else if (std::isinf(d)) {
            margin = -std::numeric_limits<double>::infinity();
        } else {
            margin = std::log(g) - std::log(d);
        }
        if (worst_n == 0 || margin < worst) {
            worst = margin;
            worst_n = n;
        }
    }
    if (shared == 0) throw InvalidInput("gamma and delta sequences share no index", "delta");
    rec.left = in.gamma.at(worst_n);
    rec.right = in.delta.at(worst_n);
    rec.inputs = "gamma " + summarize(in.gamma) + "; delta " + summarize(in.delta) + "; tightest n=" +
                 std::to_string(worst_n) + "; cover diameter " + num(in.cover_diameter) + "; gamma1 " +
                 num(in.gamma1);
    note_estimate(in.gamma, rec.caveats);
    note_estimate(in.delta, rec.caveats);
    rec.caveats.emplace_back(
        "direction checked is gamma(f^n) >= delta_n: delta_n is an expansive constant for f^n; "
        "a statement of the reverse inequality would be a misprint");

    const bool holds = worst >= -1e-12 || std::isnan(worst);
    // right <= left
    rec.status = resolve_le(holds, value_bias(in.delta.kind()), value_bias(in.gamma.kind()), rec.caveats);
    if (!(in.cover_diameter < in.gamma1)) {
        rec.caveats.emplace_back("hypothesis not met: cover diameter " + num(in.cover_diameter) +
                                 " is not below gamma(f) " + num(in.gamma1));
        rec.status = CheckStatus::inconclusive;
    }
    return rec;
}

CheckRecord lebesgue_rate_check(const LebesgueInputs& in, double tail_fraction) {
    const auto e = decay_estimate(in.gamma, tail_fraction);
    const auto l = decay_estimate(in.delta, tail_fraction);
    CheckRecord rec;
    rec.name = "lebesgue-rate";
    rec.anchor = "expansive decay rate at most Lebesgue decay rate";
    rec.inputs = "gamma " + summarize(in.gamma) + "; delta " + summarize(in.delta);
    rec.inequality = "limsup_rate(gamma) <= limsup_rate(delta) + slack";
    rec.slack = e.spread() + l.spread() + 1e-12;
    rec.left = e.limsup_rate;
    rec.right = l.limsup_rate + rec.slack;
    append(rec.caveats, e.caveats);
    append(rec.caveats, l.caveats);
    rec.status = resolve_le(rec.left <= rec.right, rate_bias(in.gamma.kind()), rate_bias(in.delta.kind()),
                            rec.caveats);
    return rec;
}

CheckRecord box_dimension_check(const BoxDimensionInputs& in, double tail_fraction) {
    if (!(in.dimension > 0.0)) throw InvalidInput("dimension must be positive", "dimension");
    const auto e = decay_estimate(in.gamma, tail_fraction);
    CheckRecord rec;
    rec.name = "box-dimension";
    rec.anchor = "liminf decay rate times upper box dimension bounds entropy";
    rec.inputs = "gamma " + summarize(in.gamma) + "; dimension " + num(in.dimension) + "; entropy " +
                 num(in.entropy);
    rec.inequality = "liminf_rate * dimension >= entropy - slack";
    rec.slack = in.dimension * (e.spread() + e.intercept_correction()) + 1e-12;
    rec.left = e.liminf_rate * in.dimension;
    rec.right = in.entropy - rec.slack;
    append(rec.caveats, e.caveats);
    // right <= left
    rec.status = resolve_le(rec.right <= rec.left, Bias::exact, rate_bias(in.gamma.kind()), rec.caveats);
    return rec;
}

CheckRecord symbolic_identity_check(const SymbolicIdentityInputs& in, double tail_fraction) {
    const auto e = decay_estimate(in.gamma, tail_fraction);
    CheckRecord rec;
    rec.name = "symbolic-identity";
    rec.anchor = "decay rate times Hausdorff dimension equals entropy for subshifts of finite type";
    rec.inputs = "gamma " + summarize(in.gamma) + "; dimension " + num(in.dimension) + "; entropy " +
                 num(in.entropy);
    rec.inequality = "|limsup_rate * dimension - entropy| <= tolerance * entropy + slack";
    rec.left = std::abs(e.limsup_rate * in.dimension - in.entropy);
    // Finite-n offset of the rate: a constant term c in -log gamma_n moves rate_n by c / n.
    rec.slack = in.dimension * e.intercept_correction() + 1e-12;
    rec.right = in.tolerance * in.entropy + rec.slack;
    append(rec.caveats, e.caveats);
    if (in.gamma.kind() != BoundKind::exact) {
        rec.caveats.emplace_back("identity needs an exact gamma sequence");
        rec.status = CheckStatus::inconclusive;
    } else {
        rec.status = rec.left <= rec.right ? CheckStatus::pass : CheckStatus::fail;
    }
    return rec;
}

CheckRecord lipschitz_rate_check(const LipschitzRateInputs& in, double tail_fraction) {
    const auto e = decay_estimate(in.gamma, tail_fraction);
    const double bound = decay_rate_bound(in.lipschitz, in.inverse_lipschitz);
    CheckRecord rec;
    rec.name = "lipschitz-rate";
    rec.anchor = "decay rate bounded by combined Lipschitz exponents";
    rec.inputs = "gamma " + summarize(in.gamma) + "; L " + num(in.lipschitz) + "; L_inv " +
                 (in.inverse_lipschitz ? num(*in.inverse_lipschitz) : std::string("none"));
    rec.inequality = in.inverse_lipschitz ? "limsup_rate <= logL*logLinv/(logL+logLinv) + slack"
                                          : "limsup_rate <= logL + slack";
    rec.slack = e.spread() + e.intercept_correction() + 1e-12;
    rec.left = e.limsup_rate;
    rec.right = bound + rec.slack;
    append(rec.caveats, e.caveats);
    rec.status = resolve_le(rec.left <= rec.right, rate_bias(in.gamma.kind()), Bias::exact, rec.caveats);
    return rec;
}

CheckRecord torus_rate_check(const TorusInputs& in, double tail_fraction) {
    const auto e = decay_estimate(in.upper, tail_fraction);
    const double target = in.entropy / 2.0;
    CheckRecord rec;
    rec.name = "torus-rate";
    rec.anchor = "decay rate of a hyperbolic toral automorphism is half its entropy";
    rec.inputs = "upper " + summarize(in.upper) + "; entropy " + num(in.entropy);
    rec.inequality = "|regression_slope(upper) - entropy/2| <= tolerance * entropy/2";
    rec.left = std::abs(e.regression_slope - target);
    rec.right = in.tolerance * target;
    rec.slack = rec.right;
    append(rec.caveats, e.caveats);
    rec.caveats.emplace_back("tolerance " + num(in.tolerance) + " is declared, not derived");
    rec.status = rec.left <= rec.right ? CheckStatus::pass : CheckStatus::fail;
    return rec;
}

CheckRecord torus_bracket_check(const TorusInputs& in) {
    CheckRecord rec;
    rec.name = "torus-bracket";
    rec.anchor = "certified lower bounds never exceed upper bounds";
    rec.inputs = "upper " + summarize(in.upper) + "; lower " + summarize(in.lower);
    rec.inequality = "lower(n) <= upper(n) for every shared n";
    double worst = -std::numeric_limits<double>::infinity();
    int worst_n = 0;
    for (const auto& [n, lo] : in.lower.entries()) {
        if (!in.upper.contains(n)) continue;
        const double gap = lo / in.upper.at(n);
        if (worst_n == 0 || gap > worst) {
            worst = gap;
            worst_n = n;
        }
    }
    if (worst_n == 0) throw InvalidInput("upper and lower sequences share no index", "lower");
    rec.left = in.lower.at(worst_n);
    rec.right = in.upper.at(worst_n);
    rec.inputs += "; tightest n=" + std::to_string(worst_n);
    if (in.upper.kind() != BoundKind::upper || in.lower.kind() != BoundKind::lower) {
        rec.caveats.emplace_back("bracket expects an upper and a lower sequence");
        rec.status = CheckStatus::inconclusive;
    } else {
        rec.status = rec.left <= rec.right * (1.0 + 1e-12) ? CheckStatus::pass : CheckStatus::fail;
    }
    return rec;
}

VerificationReport verify_report(const VerifyBundle& bundle) {
    auto wanted = [&](CheckId id, bool present) {
        const bool asked = std::find(bundle.requested.begin(), bundle.requested.end(), id) !=
                           bundle.requested.end();
        if (asked && !present) throw InvalidInput("missing input for requested check", std::string(to_string(id)));
        return bundle.requested.empty() ? present : asked;
    };
    const double tail = bundle.tail_fraction;
    VerificationReport report;
    report.system = bundle.system;
    if (wanted(CheckId::lebesgue, bundle.lebesgue.has_value())) {
        report.checks.push_back(lebesgue_finite_check(*bundle.lebesgue));
        report.checks.push_back(lebesgue_rate_check(*bundle.lebesgue, tail));
    }
    if (wanted(CheckId::box_dimension, bundle.box_dimension.has_value())) {
        report.checks.push_back(box_dimension_check(*bundle.box_dimension, tail));
    }
    if (wanted(CheckId::symbolic_identity, bundle.symbolic_identity.has_value())) {
        report.checks.push_back(symbolic_identity_check(*bundle.symbolic_identity, tail));
    }
    if (wanted(CheckId::lipschitz_rate, bundle.lipschitz_rate.has_value())) {
        report.checks.push_back(lipschitz_rate_check(*bundle.lipschitz_rate, tail));
    }
    if (wanted(CheckId::torus, bundle.torus.has_value())) {
        report.checks.push_back(torus_rate_check(*bundle.torus, tail));
        report.checks.push_back(torus_bracket_check(*bundle.torus));
    }
    if (wanted(CheckId::power_scaling, bundle.power_scaling.has_value())) {
        const auto& p = *bundle.power_scaling;
        report.checks.push_back(power_scaling_check(p.base, p.power, p.n, tail));
    }
    return report;
}

}  // namespace expanse
