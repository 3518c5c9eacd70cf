#include "expanse/decay.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "expanse/error.hpp"

namespace expanse {

std::string_view to_string(BoundKind kind) noexcept {
    switch (kind) {
        case BoundKind::exact: return "exact";
        case BoundKind::upper: return "upper";
        case BoundKind::lower: return "lower";
        case BoundKind::estimate: return "estimate";
    }
    return "estimate";
}

BoundKind bound_kind_from_string(std::string_view name) {
    if (name == "exact") return BoundKind::exact;
    if (name == "upper") return BoundKind::upper;
    if (name == "lower") return BoundKind::lower;
    if (name == "estimate") return BoundKind::estimate;
    throw InvalidInput("unknown bound kind '" + std::string(name) + "'", "kind");
}

std::string_view to_string(CheckStatus status) noexcept {
    switch (status) {
        case CheckStatus::pass: return "pass";
        case CheckStatus::fail: return "fail";
        case CheckStatus::inconclusive: return "inconclusive";
    }
    return "fail";
}

GammaSequence::GammaSequence(BoundKind kind, std::string source)
    : kind_(kind), source_(std::move(source)) {}

void GammaSequence::set(int n, double value) {
    if (n < 1) throw InvalidInput("sequence index must be a positive integer", "n");
    if (std::isnan(value) || !(value > 0.0)) {
        throw InvalidInput("sequence value at n=" + std::to_string(n) + " must be positive", "value");
    }
    if (!entries_.emplace(n, value).second) {
        throw InvalidInput("duplicate sequence index n=" + std::to_string(n), "n");
    }
}

double GammaSequence::at(int n) const {
    auto it = entries_.find(n);
    if (it == entries_.end()) throw InvalidInput("no entry for n=" + std::to_string(n), "n");
    return it->second;
}

GammaSequence GammaSequence::scaled(double c) const {
    if (!(c > 0.0)) throw InvalidInput("scale factor must be positive", "c");
    GammaSequence out(kind_, source_);
    for (const auto& [n, v] : entries_) out.set(n, v * c);
    return out;
}

double DecayEstimate::intercept_correction() const {
    if (window.empty()) return 0.0;
    return std::abs(regression_intercept) / static_cast<double>(window.front());
}

DecayEstimate decay_estimate(const GammaSequence& seq, double tail_fraction) {
    if (!(tail_fraction > 0.0 && tail_fraction < 1.0)) {
        throw InvalidInput("tail fraction must lie in (0,1)", "tail");
    }
    DecayEstimate est;
    est.tail_fraction = tail_fraction;

    bool saw_unbounded = false;
    for (const auto& [n, v] : seq.entries()) {
        if (std::isinf(v)) {
            saw_unbounded = true;
            continue;
        }
        est.rate_points.emplace(n, -std::log(v) / n);
    }
    if (saw_unbounded) est.caveats.emplace_back("vacuous expansiveness: +inf entries excluded");
    if (est.rate_points.size() < 4) {
        throw InvalidInput("need at least four finite entries to estimate a decay rate", "sequence");
    }

    const auto total = est.rate_points.size();
    const auto width = static_cast<std::size_t>(std::ceil(tail_fraction * static_cast<double>(total)));
    const std::size_t take = std::clamp<std::size_t>(width, 2, total);
    auto it = est.rate_points.begin();
    std::advance(it, total - take);
    for (; it != est.rate_points.end(); ++it) est.window.push_back(it->first);

    est.liminf_rate = std::numeric_limits<double>::infinity();
    est.limsup_rate = -std::numeric_limits<double>::infinity();
    double mean_n = 0.0;
    double mean_y = 0.0;
    for (int n : est.window) {
        const double r = est.rate_points.at(n);
        est.liminf_rate = std::min(est.liminf_rate, r);
        est.limsup_rate = std::max(est.limsup_rate, r);
        mean_n += n;
        mean_y += -std::log(seq.at(n));
    }
    mean_n /= static_cast<double>(est.window.size());
    mean_y /= static_cast<double>(est.window.size());
    double sxy = 0.0;
    double sxx = 0.0;
    for (int n : est.window) {
        const double dx = n - mean_n;
        sxy += dx * (-std::log(seq.at(n)) - mean_y);
        sxx += dx * dx;
    }
    est.regression_slope = sxy / sxx;
    est.regression_intercept = mean_y - est.regression_slope * mean_n;
    if (seq.kind() == BoundKind::upper) {
        est.caveats.emplace_back("upper bounds on gamma: rates under-estimate the true decay");
    } else if (seq.kind() == BoundKind::lower) {
        est.caveats.emplace_back("lower bounds on gamma: rates over-estimate the true decay");
    } else if (seq.kind() == BoundKind::estimate) {
        est.caveats.emplace_back("sampled estimate: no rigorous error direction");
    }
    return est;
}

namespace {

std::string summarize(const GammaSequence& s) {
    std::ostringstream os;
    os << s.source() << " (" << to_string(s.kind()) << ", " << s.size() << " entries)";
    return os.str();
}

bool same_keys(const GammaSequence& a, const GammaSequence& b) {
    if (a.size() != b.size()) return false;
    return std::equal(a.entries().begin(), a.entries().end(), b.entries().begin(),
                      [](const auto& x, const auto& y) { return x.first == y.first; });
}

}  // namespace

CheckRecord power_scaling_check(const GammaSequence& base, const GammaSequence& power, int n,
                                double tail_fraction) {
    if (n < 1) throw InvalidInput("power must be positive", "n");
    if (!same_keys(base, power)) {
        throw InvalidInput("index mismatch: base and power sequences must share their indices", "power");
    }
    if (base.kind() == BoundKind::exact && power.kind() == BoundKind::exact) {
        for (const auto& [k, v] : power.entries()) {
            if (base.contains(k * n) && std::abs(base.at(k * n) - v) > 1e-12 * v) {
                throw InvalidInput("index mismatch: power[" + std::to_string(k) + "] != base[" +
                                       std::to_string(k * n) + "]",
                                   "power");
            }
        }
    }

    const DecayEstimate b = decay_estimate(base, tail_fraction);
    const DecayEstimate p = decay_estimate(power, tail_fraction);

    CheckRecord rec;
    rec.name = "power-scaling";
    rec.anchor = "decay rate of f^n vs n times decay rate of f";
    rec.inputs = "base " + summarize(base) + "; power n=" + std::to_string(n) + " " + summarize(power);
    rec.inequality = "limsup_rate(f^n) <= n*limsup_rate(f) + slack and liminf_rate(f^n) >= n*liminf_rate(f) - slack";
    rec.slack = 2.0 * std::max(p.spread(), n * b.spread()) + 1e-12;

    const double upper_gap = p.limsup_rate - (n * b.limsup_rate + rec.slack);
    const double lower_gap = (n * b.liminf_rate - rec.slack) - p.liminf_rate;
    // Report whichever side is tighter.
    if (upper_gap >= lower_gap) {
        rec.left = p.limsup_rate;
        rec.right = n * b.limsup_rate + rec.slack;
    } else {
        rec.left = n * b.liminf_rate - rec.slack;
        rec.right = p.liminf_rate;
    }
    const bool ok = upper_gap <= 0.0 && lower_gap <= 0.0;
    if (base.kind() != power.kind()) {
        rec.status = CheckStatus::inconclusive;
        rec.caveats.emplace_back("base and power sequences have different bound kinds");
    } else {
        rec.status = ok ? CheckStatus::pass : CheckStatus::fail;
    }
    if (base.kind() == BoundKind::upper || base.kind() == BoundKind::lower) {
        rec.caveats.emplace_back("bound-kind sequences: both sides shift in the same direction");
    }
    return rec;
}

}  // namespace expanse
