#pragma once

// Exponential decay rates of expansive constants and Lebesgue numbers at
// finite n: tail-window liminf/limsup estimates and a least-squares slope.

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace expanse {

/// How a sequence value relates to the true quantity.
enum class BoundKind { exact, upper, lower, estimate };

std::string_view to_string(BoundKind kind) noexcept;
BoundKind bound_kind_from_string(std::string_view name);

/// Values gamma(f^n) (or delta_n) keyed by n >= 1. A value may be +inf,
/// meaning "vacuously expansive" / "element covers everything".
class GammaSequence {
public:
    GammaSequence(BoundKind kind, std::string source);

    /// Throws InvalidInput unless n >= 1 is new and value > 0 (NaN rejected).
    void set(int n, double value);

    BoundKind kind() const noexcept { return kind_; }
    const std::string& source() const noexcept { return source_; }
    const std::map<int, double>& entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }
    bool contains(int n) const { return entries_.count(n) != 0; }
    double at(int n) const;

    /// Every value multiplied by c > 0.
    GammaSequence scaled(double c) const;

private:
    BoundKind kind_;
    std::string source_;
    std::map<int, double> entries_;
};

struct DecayEstimate {
    std::map<int, double> rate_points;  // n -> -log(value)/n, finite entries only
    std::vector<int> window;            // tail indices used for the estimates
    double liminf_rate = 0.0;           // min of rate_points over the window
    double limsup_rate = 0.0;           // max of rate_points over the window
    double regression_slope = 0.0;      // least squares of -log value on n over the window
    double regression_intercept = 0.0;
    double tail_fraction = 0.5;
    std::vector<std::string> caveats;

    double spread() const noexcept { return limsup_rate - liminf_rate; }
    /// Rate deviation explained by the fitted intercept at the start of the window.
    double intercept_correction() const;
};

/// Tail window = the ceil(tail_fraction * N) largest finite indices. Requires
/// at least four finite entries; +inf entries are dropped with a caveat.
DecayEstimate decay_estimate(const GammaSequence& seq, double tail_fraction = 0.5);

enum class CheckStatus { pass, fail, inconclusive };

std::string_view to_string(CheckStatus status) noexcept;

/// One evaluated inequality. `left op right` is the inequality as printed in
/// `inequality`; `slack` has already been folded into `right`.
struct CheckRecord {
    std::string name;
    std::string anchor;
    std::string inputs;
    std::string inequality;
    double left = 0.0;
    double right = 0.0;
    double slack = 0.0;
    CheckStatus status = CheckStatus::fail;
    std::vector<std::string> caveats;

    bool passed() const noexcept { return status == CheckStatus::pass; }
};

/// limsup rate of f^n is at most n times that of f, and the liminf rate of
/// f^n is at least n times that of f. `power[k]` holds gamma((f^n)^k); both
/// sequences must be indexed by the same keys.
CheckRecord power_scaling_check(const GammaSequence& base, const GammaSequence& power, int n,
                                double tail_fraction = 0.5);

}  // namespace expanse
