#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "expanse/error.hpp"
#include "expanse/lipschitz.hpp"
#include "expanse/verify.hpp"
#include "manifest.hpp"
#include "report.hpp"
#include "spec_io.hpp"

namespace expanse::cli {

using nlohmann::json;

namespace {

constexpr int kDenseGrid = 1024;

// Display unit for logarithmic quantities.
struct Units {
    double log_unit = 1.0;
    double operator()(double v) const { return v / log_unit; }
};

json sequence_doc(const GammaSequence& s, const Units& u, double tail) {
    json rows = json::array();
    int finite = 0;
    for (const auto& [n, v] : s.entries()) {
        json r;
        r["n"] = n;
        r["gamma"] = real(v);
        if (std::isinf(v)) {
            r["rate"] = nullptr;
        } else {
            r["rate"] = u(-std::log(v) / n);
            ++finite;
        }
        rows.push_back(std::move(r));
    }
    json out;
    out["kind"] = std::string(to_string(s.kind()));
    out["source"] = s.source();
    out["rows"] = std::move(rows);
    if (finite >= 4) {
        const auto e = decay_estimate(s, tail);
        out["estimate"] = {{"liminf_rate", u(e.liminf_rate)},
                           {"limsup_rate", u(e.limsup_rate)},
                           {"regression_slope", u(e.regression_slope)},
                           {"regression_intercept", u(e.regression_intercept)},
                           {"window", e.window},
                           {"tail_fraction", e.tail_fraction},
                           {"caveats", e.caveats}};
    }
    return out;
}

json check_doc(const CheckRecord& c, const Units& u) {
    // These two compare gamma values, not rates.
    const bool values = c.name == "lebesgue-finite" || c.name == "torus-bracket";
    auto conv = [&](double v) { return values ? v : u(v); };
    return {{"name", c.name},
            {"anchor", c.anchor},
            {"inputs", c.inputs},
            {"inequality", c.inequality},
            {"left", real(conv(c.left))},
            {"right", real(conv(c.right))},
            {"slack", real(conv(c.slack))},
            {"status", std::string(to_string(c.status))},
            {"caveats", c.caveats}};
}

int checked_power(const Params& p, std::optional<int> spec_value, int fallback) {
    const int n = p.n_max.value_or(spec_value.value_or(fallback));
    if (n < 1) throw InvalidInput("must be positive", "n-max");
    if (n > kMaxPower && !p.unsafe) {
        throw InvalidInput("exceeds the cap of " + std::to_string(kMaxPower) + " (use --unsafe)", "n-max");
    }
    return n;
}

std::vector<int> checked_grids(const Params& p, const std::vector<int>& spec_grids, int dim) {
    std::vector<int> grids = !p.grids.empty() ? p.grids : spec_grids;
    if (grids.empty()) grids = {64};
    for (int q : grids) {
        if (q < 2) throw InvalidInput("grid denominators must be at least 2", "grid");
        if (q > kMaxGrid && !p.unsafe) {
            throw InvalidInput("exceeds the cap of " + std::to_string(kMaxGrid) + " (use --unsafe)", "grid");
        }
        if (std::pow(static_cast<double>(q), dim) > static_cast<double>(1u << 26)) {
            throw InvalidInput("grid of " + std::to_string(q) + "^" + std::to_string(dim) + " points is too large",
                               "grid");
        }
    }
    std::sort(grids.begin(), grids.end());
    grids.erase(std::unique(grids.begin(), grids.end()), grids.end());
    return grids;
}

json symbol_array(const std::vector<Symbol>& v) { return json(v); }

json witness_doc(const PairWitness& w) {
    return {{"period", w.period},
            {"origin", w.origin},
            {"seq_a", symbol_array(w.seq_a)},
            {"seq_b", symbol_array(w.seq_b)},
            {"head_a", symbol_array(w.head_a)},
            {"head_b", symbol_array(w.head_b)},
            {"left_a", symbol_array(w.left_a)},
            {"left_b", symbol_array(w.left_b)},
            {"difference_positions", w.difference_positions}};
}

// ---- symbolic ---------------------------------------------------------------

struct SymbolicRun {
    GammaSequence gamma{BoundKind::exact, "pair automaton"};
    GammaSequence delta{BoundKind::exact, "zero-cylinder cover"};
    GammaSequence square{BoundKind::exact, "pair automaton, square of the shift"};
    EntropyResult entropy;
    double dimension = 0.0;
    json doc;
};

SymbolicRun run_symbolic(const SymbolicSpace& sp, int n_max, const Units& u, double tail, bool with_square) {
    SymbolicRun run;
    json witnesses = json::array();
    for (int n = 1; n <= n_max; ++n) {
        const auto g = exact_expansive_constant(sp, n);
        run.gamma.set(n, g.value);
        run.delta.set(n, cylinder_lebesgue_exact(sp, n).value);
        json w;
        w["n"] = n;
        if (g.vacuous) {
            w["vacuous"] = true;
        } else {
            w["exponent"] = g.exponent;
            w["witness"] = witness_doc(*g.witness);
            w["verified"] = verify_pair_witness(sp, n, *g.witness, g.exponent);
        }
        witnesses.push_back(std::move(w));
    }
    if (with_square) {
        for (int k = 1; k <= n_max; ++k) run.square.set(k, exact_expansive_constant(sp, 2 * k).value);
    }
    run.entropy = entropy(sp.matrix);
    run.dimension = hausdorff_dimension(sp).value;
    const auto gen = generator_report(sp.matrix);

    json& d = run.doc;
    d["summary"] = {{"symbols", sp.matrix.size()},
                    {"q", sp.q},
                    {"sided", sp.sided == Sidedness::two_sided ? "two" : "one"},
                    {"irreducible", sp.matrix.irreducible()},
                    {"entropy", u(run.entropy.value)},
                    {"entropy_converged", run.entropy.converged},
                    {"entropy_iterations", run.entropy.iterations},
                    {"hausdorff_dimension", run.dimension},
                    {"generator_lower_bound", gen.lower_bound}};
    if (gen.exact) d["summary"]["generator_exact"] = *gen.exact;
    d["sequences"]["gamma"] = sequence_doc(run.gamma, u, tail);
    d["sequences"]["delta"] = sequence_doc(run.delta, u, tail);
    d["witnesses"] = std::move(witnesses);
    json trace = json::array();
    for (double t : run.entropy.trace) trace.push_back(u(t));
    d["entropy_trace"] = std::move(trace);
    d["primary"] = "gamma";
    return run;
}

VerifyBundle symbolic_bundle(const SymbolicSpace& sp, const SymbolicRun& run) {
    VerifyBundle b;
    b.system = "subshift of finite type";
    const double h = run.entropy.value;
    // Points of one zero-cylinder agree at 0 and are at most 1/q apart.
    const double diameter = 1.0 / sp.q;
    b.lebesgue = LebesgueInputs{run.gamma, run.delta, diameter, run.gamma.at(1)};
    b.box_dimension = BoxDimensionInputs{run.gamma, run.dimension, h};
    b.symbolic_identity = SymbolicIdentityInputs{run.gamma, run.dimension, h, 0.02};
    // The shift and its inverse are q-Lipschitz for the q-metric.
    b.lipschitz_rate = LipschitzRateInputs{run.gamma, sp.q,
                                           sp.sided == Sidedness::two_sided ? std::optional<double>(sp.q)
                                                                            : std::nullopt};
    b.power_scaling = PowerInputs{run.gamma, run.square, 2};
    return b;
}

// ---- torus ------------------------------------------------------------------

struct TorusRun {
    ExpansiveBracket bracket;
    double entropy = 0.0;
    json doc;
};

TorusRun run_torus(const TorusSpec& spec, const Params& p, const Units& u) {
    const auto& t = spec.map;
    const int n_max = checked_power(p, spec.n_max, 12);
    const auto grids = checked_grids(p, spec.grids, t.dim());

    json g1;
    double gamma1 = certified_gamma1(t);
    if (p.gamma1) {
        gamma1 = *p.gamma1;
        g1["mode"] = "manual (command line)";
    } else if (spec.gamma1.manual) {
        gamma1 = spec.gamma1.value;
        g1["mode"] = "manual (spec)";
    } else {
        g1["mode"] = "certified";
        g1["rule"] = "1/(4 max(|M|, |M^-1|))";
    }
    if (!(gamma1 > 0.0)) throw InvalidInput("must be positive", "gamma1");
    g1["value"] = gamma1;
    const int dense = t.dim() == 2 ? kDenseGrid : 16;
    const double dense_upper = gamma_upper_bound(t, 1, RationalGrid(dense));
    g1["dense_grid_Q"] = dense;
    g1["dense_grid_upper"] = dense_upper;
    if (gamma1 > dense_upper) {
        throw InvalidInput("value " + format_real(gamma1) + " exceeds the rigorous upper bound " +
                               format_real(dense_upper) + " on gamma(f) from the Q=" + std::to_string(dense) +
                               " grid",
                           "gamma1");
    }

    TorusRun run;
    run.entropy = entropy(t);
    json seqs;
    std::vector<GammaSequence> per_grid;
    for (int q : grids) {
        auto b = expansive_bracket(t, n_max, RationalGrid(q), gamma1);
        char key[32];
        std::snprintf(key, sizeof key, "upper_grid_q%04d", q);
        seqs[key] = sequence_doc(b.upper_grid, u, p.tail);
        per_grid.push_back(b.upper_grid);
        run.bracket = std::move(b);  // the finest grid is kept
    }
    bool monotone = true;
    for (std::size_t i = 0; i < grids.size(); ++i) {
        for (std::size_t j = i + 1; j < grids.size(); ++j) {
            if (grids[j] % grids[i] != 0) continue;
            for (const auto& [n, v] : per_grid[j].entries()) {
                if (v > per_grid[i].at(n) * (1.0 + 1e-12)) monotone = false;
            }
        }
    }
    seqs["upper_fixed"] = sequence_doc(run.bracket.upper_fixed, u, p.tail);
    seqs["upper"] = sequence_doc(run.bracket.upper, u, p.tail);
    seqs["lower"] = sequence_doc(run.bracket.lower, u, p.tail);

    json& d = run.doc;
    d["summary"] = {{"dim", t.dim()},
                    {"matrix", t.matrix().rows()},
                    {"entropy", u(run.entropy)},
                    {"half_entropy", u(run.entropy / 2.0)},
                    {"expanding_eigenvalue", t.expanding_eigenvalue()},
                    {"eigen_moduli", t.eigen_moduli()},
                    {"lipschitz", t.lipschitz()},
                    {"inverse_lipschitz", t.inverse_lipschitz()},
                    {"decay_rate_bound", u(decay_rate_bound(t.lipschitz(), t.inverse_lipschitz()))},
                    {"grids", grids},
                    {"grid_monotone", monotone},
                    {"gamma1", g1}};
    d["sequences"] = std::move(seqs);
    d["primary"] = "upper";
    return run;
}

VerifyBundle torus_bundle(const TorusSpec& spec, const TorusRun& run) {
    VerifyBundle b;
    b.system = "hyperbolic toral automorphism";
    b.torus = TorusInputs{run.bracket.upper, run.bracket.lower, run.entropy, 0.15};
    b.box_dimension = BoxDimensionInputs{run.bracket.upper, static_cast<double>(spec.map.dim()), run.entropy};
    b.lipschitz_rate =
        LipschitzRateInputs{run.bracket.lower, spec.map.lipschitz(), spec.map.inverse_lipschitz()};
    return b;
}

// ---- sampled ----------------------------------------------------------------

struct SampledRun {
    GammaSequence gamma{BoundKind::estimate, "finite-sample pair scan"};
    std::optional<GammaSequence> delta;
    std::optional<DimensionEstimate> dimension;
    double lipschitz = 1.0;
    std::optional<double> inverse_lipschitz;
    json doc;
};

SampledRun run_sampled(const SampledSpec& spec, const Params& p, const Units& u) {
    const auto& sys = spec.system;
    if (sys.size() > kMaxPoints && !p.unsafe) throw InvalidInput("sample exceeds 10^5 points (use --unsafe)", "points");
    const int n_max = checked_power(p, std::nullopt, 6);
    const int horizon = p.horizon.value_or(8);
    if (horizon < 0) throw InvalidInput("must be nonnegative", "horizon");
    const Parallelism par = Parallelism::hardware();

    SampledRun run;
    for (int n = 1; n <= n_max; ++n) run.gamma.set(n, expansive_constant_estimate(sys, n, horizon, par));
    if (sys.size() >= 2) {
        run.lipschitz = lipschitz_constant_estimate(sys, par);
        if (sys.invertible()) {
            const FiniteSampledSystem inv(sys.size(), std::vector<double>(sys.distances().begin(), sys.distances().end()),
                                          *sys.inverse_map());
            run.inverse_lipschitz = lipschitz_constant_estimate(inv, par);
        }
    }
    json& d = run.doc;
    d["summary"] = {{"points", sys.size()},
                    {"invertible", sys.invertible()},
                    {"diameter", sys.diameter()},
                    {"resolution", real(sys.resolution())},
                    {"horizon", horizon},
                    {"lipschitz_estimate", run.lipschitz}};
    if (run.inverse_lipschitz) d["summary"]["inverse_lipschitz_estimate"] = *run.inverse_lipschitz;
    if (spec.entropy) d["summary"]["entropy"] = u(*spec.entropy);
    d["sequences"]["gamma"] = sequence_doc(run.gamma, u, p.tail);
    if (spec.cover) {
        GammaSequence delta(BoundKind::estimate, "finite-sample refined cover");
        const auto values = lebesgue_sequence(sys, *spec.cover, n_max);
        for (int n = 1; n <= n_max; ++n) delta.set(n, values[n - 1]);
        d["sequences"]["delta"] = sequence_doc(delta, u, p.tail);
        d["summary"]["cover_diameter"] = spec.cover->diameter(sys);
        run.delta = std::move(delta);
    }
    if (!spec.scales.empty()) {
        auto est = box_dimension_estimate(sys, spec.scales, par);
        d["summary"]["box_dimension"] = {{"scales", est.scales},
                                         {"covering_counts", est.covering_counts},
                                         {"slope_lower", est.slope_lower},
                                         {"slope_upper", est.slope_upper}};
        run.dimension = std::move(est);
    }
    d["primary"] = "gamma";
    return run;
}

VerifyBundle sampled_bundle(const SampledSpec& spec, const SampledRun& run) {
    VerifyBundle b;
    b.system = "finite sample";
    if (run.delta) {
        b.lebesgue = LebesgueInputs{run.gamma, *run.delta, spec.cover->diameter(spec.system), run.gamma.at(1)};
    }
    if (run.dimension && spec.entropy) {
        b.box_dimension = BoxDimensionInputs{run.gamma, run.dimension->slope_upper, *spec.entropy};
    }
    if (run.lipschitz >= 1.0 && (!run.inverse_lipschitz || *run.inverse_lipschitz >= 1.0)) {
        b.lipschitz_rate = LipschitzRateInputs{run.gamma, run.lipschitz, run.inverse_lipschitz};
    }
    return b;
}

// -----------------------------------------------------------------------------

json parameters_doc(const std::string& command, const Params& p) {
    json j;
    j["command"] = command;
    j["tail"] = p.tail;
    j["log_base"] = p.log2 ? "2" : "e";
    j["unsafe"] = p.unsafe;
    if (p.n_max) j["n_max"] = *p.n_max;
    if (!p.grids.empty()) j["grid"] = p.grids;
    if (p.horizon) j["horizon"] = *p.horizon;
    if (p.gamma1) j["gamma1"] = *p.gamma1;
    return j;
}

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

const char* kind_name(const SystemSpec& s) {
    return std::visit(Overloaded{[](const SymbolicSpec&) { return "symbolic"; },
                                 [](const TorusSpec&) { return "torus"; },
                                 [](const SampledSpec&) { return "sampled"; },
                                 [](const BundleSpec&) { return "bundle"; }},
                      s);
}

}  // namespace

CommandResult execute_command(const std::string& command, const Params& p) {
    if (!(p.tail > 0.0 && p.tail < 1.0)) throw InvalidInput("must lie in (0,1)", "tail");
    if (p.horizon && *p.horizon > 10000 && !p.unsafe) throw InvalidInput("exceeds the cap of 10000", "horizon");
    const std::string text = load_spec_text(p.spec);
    const SystemSpec spec = parse_system_spec(text);
    const Units u{p.log2 ? std::numbers::ln2 : 1.0};

    auto wrong_kind = [&](const char* expected) {
        return InvalidInput(std::string("'") + command + "' needs a " + expected + " spec, got " + kind_name(spec),
                            "spec");
    };

    CommandResult result;
    json doc;
    std::optional<VerifyBundle> bundle;
    if (command == "sft" || (command == "verify" && std::holds_alternative<SymbolicSpec>(spec))) {
        const auto* s = std::get_if<SymbolicSpec>(&spec);
        if (!s) throw wrong_kind("symbolic");
        const bool verify = command == "verify";
        auto run = run_symbolic(s->space, checked_power(p, std::nullopt, verify ? 24 : 12), u, p.tail, verify);
        doc = std::move(run.doc);
        if (verify) bundle = symbolic_bundle(s->space, run);
    } else if (command == "torus" || (command == "verify" && std::holds_alternative<TorusSpec>(spec))) {
        const auto* s = std::get_if<TorusSpec>(&spec);
        if (!s) throw wrong_kind("torus");
        auto run = run_torus(*s, p, u);
        doc = std::move(run.doc);
        if (command == "verify") bundle = torus_bundle(*s, run);
    } else if (command == "sampled" || (command == "verify" && std::holds_alternative<SampledSpec>(spec))) {
        const auto* s = std::get_if<SampledSpec>(&spec);
        if (!s) throw wrong_kind("sampled");
        auto run = run_sampled(*s, p, u);
        doc = std::move(run.doc);
        if (command == "verify") bundle = sampled_bundle(*s, run);
    } else if (command == "verify") {
        const auto& b = std::get<BundleSpec>(spec);
        bundle = b.bundle;
        bundle->tail_fraction = p.tail;
        doc["summary"] = {{"system", b.bundle.system}};
    } else {
        throw InvalidInput("unknown command '" + command + "'", "command");
    }

    if (bundle) {
        bundle->tail_fraction = p.tail;
        const auto report = verify_report(*bundle);
        json checks = json::array();
        for (const auto& c : report.checks) checks.push_back(check_doc(c, u));
        doc["checks"] = std::move(checks);
        doc["status"] = report.all_passed() ? "pass" : "fail";
        doc["failing"] = report.failing();
        result.exit_code = report.all_passed() ? 0 : 1;
    }
    doc["command"] = command;
    doc["manifest"] = make_manifest(text, p.argv, parameters_doc(command, p));
    result.doc = std::move(doc);
    return result;
}

}  // namespace expanse::cli
