#pragma once

// Inequality and identity checks over gamma/delta sequences, assembled into a
// report in a fixed order.

#include <optional>
#include <string>
#include <vector>

#include "expanse/decay.hpp"

namespace expanse {

/// gamma(f^n) >= delta_n for shared n, plus the rate comparison of the two.
struct LebesgueInputs {
    GammaSequence gamma;
    GammaSequence delta;
    double cover_diameter = 0.0;
    double gamma1 = 0.0;  // gamma(f) or a lower bound on it
};

/// liminf rate * upper box dimension >= entropy.
struct BoxDimensionInputs {
    GammaSequence gamma;
    double dimension = 0.0;
    double entropy = 0.0;
};

/// limsup rate * Hausdorff dimension == entropy for a subshift of finite type.
struct SymbolicIdentityInputs {
    GammaSequence gamma;
    double dimension = 0.0;
    double entropy = 0.0;
    double tolerance = 0.02;  // relative to entropy
};

/// limsup rate <= log L log Linv / (log L + log Linv).
struct LipschitzRateInputs {
    GammaSequence gamma;
    double lipschitz = 1.0;
    std::optional<double> inverse_lipschitz;
};

/// Fitted rate of the upper sequence vs half the entropy, and lower <= upper.
struct TorusInputs {
    GammaSequence upper;
    GammaSequence lower;
    double entropy = 0.0;
    double tolerance = 0.15;  // relative to entropy / 2
};

struct PowerInputs {
    GammaSequence base;
    GammaSequence power;
    int n = 2;
};

enum class CheckId { lebesgue, box_dimension, symbolic_identity, lipschitz_rate, torus, power_scaling };

std::string_view to_string(CheckId id) noexcept;
CheckId check_id_from_string(std::string_view name);

struct VerifyBundle {
    std::string system;
    double tail_fraction = 0.5;
    /// Empty means "every check whose inputs are present".
    std::vector<CheckId> requested;

    std::optional<LebesgueInputs> lebesgue;
    std::optional<BoxDimensionInputs> box_dimension;
    std::optional<SymbolicIdentityInputs> symbolic_identity;
    std::optional<LipschitzRateInputs> lipschitz_rate;
    std::optional<TorusInputs> torus;
    std::optional<PowerInputs> power_scaling;
};

struct VerificationReport {
    std::string system;
    std::vector<CheckRecord> checks;

    bool all_passed() const noexcept;
    /// Names of checks that did not pass.
    std::vector<std::string> failing() const;
};

/// Throws InvalidInput when a requested check has no inputs.
VerificationReport verify_report(const VerifyBundle& bundle);

CheckRecord lebesgue_finite_check(const LebesgueInputs& in);
CheckRecord lebesgue_rate_check(const LebesgueInputs& in, double tail_fraction = 0.5);
CheckRecord box_dimension_check(const BoxDimensionInputs& in, double tail_fraction = 0.5);
CheckRecord symbolic_identity_check(const SymbolicIdentityInputs& in, double tail_fraction = 0.5);
CheckRecord lipschitz_rate_check(const LipschitzRateInputs& in, double tail_fraction = 0.5);
CheckRecord torus_rate_check(const TorusInputs& in, double tail_fraction = 0.5);
CheckRecord torus_bracket_check(const TorusInputs& in);

}  // namespace expanse
