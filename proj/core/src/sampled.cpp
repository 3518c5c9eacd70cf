#include "expanse/sampled.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

#include "expanse/error.hpp"

namespace expanse {

namespace {

std::optional<std::vector<PointIndex>> invert_if_bijective(std::span<const PointIndex> map) {
    std::vector<PointIndex> inv(map.size(), 0);
    std::vector<bool> hit(map.size(), false);
    for (std::size_t i = 0; i < map.size(); ++i) {
        if (hit[map[i]]) return std::nullopt;
        hit[map[i]] = true;
        inv[map[i]] = static_cast<PointIndex>(i);
    }
    return inv;
}

void check_index(const FiniteSampledSystem& sys, PointIndex i, const char* field) {
    if (i >= sys.size()) {
        throw InvalidInput("point index " + std::to_string(i) + " out of range", field);
    }
}

}  // namespace

FiniteSampledSystem::FiniteSampledSystem(std::size_t point_count, std::vector<double> dist,
                                         std::vector<PointIndex> map,
                                         std::optional<std::vector<PointIndex>> inverse_map)
    : count_(point_count), dist_(std::move(dist)), map_(std::move(map)) {
    if (count_ == 0) throw InvalidInput("sample must contain at least one point", "points");
    if (count_ > std::numeric_limits<PointIndex>::max()) throw InvalidInput("too many points", "points");
    if (dist_.size() != count_ * count_) {
        throw InvalidInput("distance table must be points x points", "dist");
    }
    if (map_.size() != count_) throw InvalidInput("map must have one image per point", "map");

    for (std::size_t i = 0; i < count_; ++i) {
        if (dist_[i * count_ + i] != 0.0) {
            throw InvalidInput("nonzero diagonal entry at " + std::to_string(i), "dist");
        }
        for (std::size_t j = i + 1; j < count_; ++j) {
            const double a = dist_[i * count_ + j];
            const double b = dist_[j * count_ + i];
            if (!std::isfinite(a) || a < 0.0) {
                throw InvalidInput("entry (" + std::to_string(i) + "," + std::to_string(j) +
                                       ") is negative or not finite",
                                   "dist");
            }
            if (a != b) {
                throw InvalidInput("table is not symmetric at (" + std::to_string(i) + "," +
                                       std::to_string(j) + ")",
                                   "dist");
            }
        }
    }
    for (std::size_t i = 0; i < count_; ++i) {
        if (map_[i] >= count_) {
            throw InvalidInput("image of point " + std::to_string(i) + " is outside the sample", "map");
        }
    }

    auto derived = invert_if_bijective(map_);
    if (inverse_map) {
        if (!derived) throw InvalidInput("inverse given but map is not a bijection", "inverse_map");
        if (*inverse_map != *derived) {
            throw InvalidInput("inverse_map(map(i)) != i for some i", "inverse_map");
        }
    }
    inverse_ = std::move(derived);
}

FiniteSampledSystem FiniteSampledSystem::from_metric(
    std::size_t point_count, const std::function<double(PointIndex, PointIndex)>& metric,
    std::vector<PointIndex> map) {
    std::vector<double> dist(point_count * point_count, 0.0);
    for (std::size_t i = 0; i < point_count; ++i) {
        for (std::size_t j = i + 1; j < point_count; ++j) {
            const double d = metric(static_cast<PointIndex>(i), static_cast<PointIndex>(j));
            dist[i * point_count + j] = d;
            dist[j * point_count + i] = d;
        }
    }
    return FiniteSampledSystem(point_count, std::move(dist), std::move(map));
}

std::vector<PointIndex> FiniteSampledSystem::power(long k) const {
    std::vector<PointIndex> out(count_);
    for (std::size_t i = 0; i < count_; ++i) out[i] = static_cast<PointIndex>(i);
    if (k < 0 && !inverse_) throw InvalidInput("negative power of a non-invertible sample");
    const auto& step = k < 0 ? *inverse_ : map_;
    for (long t = 0; t < std::labs(k); ++t) {
        for (auto& p : out) p = step[p];
    }
    return out;
}

double FiniteSampledSystem::diameter() const noexcept {
    return dist_.empty() ? 0.0 : *std::max_element(dist_.begin(), dist_.end());
}

double FiniteSampledSystem::resolution() const noexcept {
    double r = std::numeric_limits<double>::infinity();
    for (double d : dist_) {
        if (d > 0.0) r = std::min(r, d);
    }
    return r;
}

OpenCoverSpec::OpenCoverSpec(std::vector<std::vector<PointIndex>> elements)
    : elements_(std::move(elements)) {
    if (elements_.empty()) throw InvalidInput("cover has no elements", "cover");
    for (auto& e : elements_) {
        if (e.empty()) throw InvalidInput("cover element is empty", "cover");
        std::sort(e.begin(), e.end());
        e.erase(std::unique(e.begin(), e.end()), e.end());
    }
}

void OpenCoverSpec::validate_for(const FiniteSampledSystem& sys) const {
    std::vector<bool> covered(sys.size(), false);
    for (const auto& e : elements_) {
        for (PointIndex p : e) {
            check_index(sys, p, "cover");
            covered[p] = true;
        }
    }
    for (std::size_t i = 0; i < covered.size(); ++i) {
        if (!covered[i]) throw InvalidInput("point " + std::to_string(i) + " is not covered", "cover");
    }
}

double OpenCoverSpec::diameter(const FiniteSampledSystem& sys) const {
    double d = 0.0;
    for (const auto& e : elements_) {
        for (std::size_t a = 0; a < e.size(); ++a) {
            for (std::size_t b = a + 1; b < e.size(); ++b) d = std::max(d, sys.dist(e[a], e[b]));
        }
    }
    return d;
}

double bowen_distance(const FiniteSampledSystem& sys, PointIndex x, PointIndex y, int n) {
    check_index(sys, x, "x");
    check_index(sys, y, "y");
    if (n < 1) throw InvalidInput("n must be positive", "n");
    double d = 0.0;
    for (int k = 0; k < n; ++k) {
        d = std::max(d, sys.dist(x, y));
        x = sys.image(x);
        y = sys.image(y);
    }
    return d;
}

double expansive_constant_estimate(const FiniteSampledSystem& sys, int step, int horizon,
                                   Parallelism par) {
    if (sys.size() < 2) throw InvalidInput("need at least two points", "points");
    if (step < 1) throw InvalidInput("step must be positive", "n");
    if (horizon < 0) throw InvalidInput("horizon must be nonnegative", "horizon");

    const std::size_t count = sys.size();
    // orbit[x * width + t] = f^{k_t * step}(x) for the admissible k in a fixed order.
    const std::size_t width = sys.invertible() ? 2 * static_cast<std::size_t>(horizon) + 1
                                               : static_cast<std::size_t>(horizon) + 1;
    std::vector<PointIndex> orbit(count * width);
    {
        const auto fwd = sys.power(step);
        std::vector<PointIndex> cur(count);
        for (std::size_t i = 0; i < count; ++i) cur[i] = static_cast<PointIndex>(i);
        for (int k = 0; k <= horizon; ++k) {
            for (std::size_t i = 0; i < count; ++i) orbit[i * width + k] = cur[i];
            for (auto& p : cur) p = fwd[p];
        }
        if (sys.invertible()) {
            const auto bwd = sys.power(-static_cast<long>(step));
            for (std::size_t i = 0; i < count; ++i) cur[i] = bwd[i];
            for (int k = 1; k <= horizon; ++k) {
                for (std::size_t i = 0; i < count; ++i) orbit[i * width + horizon + k] = cur[i];
                for (auto& p : cur) p = bwd[p];
            }
        }
    }

    auto body = [&](unsigned worker, unsigned workers) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = worker; i < count; i += workers) {
            const PointIndex* oi = &orbit[i * width];
            for (std::size_t j = i + 1; j < count; ++j) {
                const PointIndex* oj = &orbit[j * width];
                double sup = 0.0;
                for (std::size_t t = 0; t < width && sup < best; ++t) {
                    sup = std::max(sup, sys.dist(oi[t], oj[t]));
                }
                best = std::min(best, sup);
            }
        }
        return best;
    };
    return parallel_reduce(par.workers, std::numeric_limits<double>::infinity(), body,
                           [](double a, double b) { return std::min(a, b); });
}

double lipschitz_constant_estimate(const FiniteSampledSystem& sys, Parallelism par) {
    if (sys.size() < 2) throw InvalidInput("need at least two points", "points");
    const std::size_t count = sys.size();
    for (std::size_t i = 0; i < count; ++i) {
        for (std::size_t j = i + 1; j < count; ++j) {
            if (sys.dist(static_cast<PointIndex>(i), static_cast<PointIndex>(j)) == 0.0) {
                throw InvalidInput("distinct points " + std::to_string(i) + " and " +
                                       std::to_string(j) + " are at distance zero",
                                   "dist");
            }
        }
    }
    auto body = [&](unsigned worker, unsigned workers) {
        double best = 0.0;
        for (std::size_t i = worker; i < count; i += workers) {
            const auto pi = static_cast<PointIndex>(i);
            for (std::size_t j = i + 1; j < count; ++j) {
                const auto pj = static_cast<PointIndex>(j);
                best = std::max(best, sys.dist(sys.image(pi), sys.image(pj)) / sys.dist(pi, pj));
            }
        }
        return best;
    };
    return parallel_reduce(par.workers, 0.0, body, [](double a, double b) { return std::max(a, b); });
}

namespace {

// Largest distance-to-complement over elements containing each point, folded
// into `reach`.
void accumulate_reach(const FiniteSampledSystem& sys, const std::vector<PointIndex>& element,
                      std::vector<char>& mask, std::vector<double>& reach) {
    const std::size_t count = sys.size();
    if (element.size() == count) {
        for (auto& r : reach) r = kUnbounded;
        return;
    }
    for (PointIndex p : element) mask[p] = 1;
    for (PointIndex x : element) {
        if (reach[x] == kUnbounded) continue;
        double to_complement = kUnbounded;
        for (std::size_t y = 0; y < count; ++y) {
            if (!mask[y]) to_complement = std::min(to_complement, sys.dist(x, static_cast<PointIndex>(y)));
        }
        reach[x] = std::max(reach[x], to_complement);
    }
    for (PointIndex p : element) mask[p] = 0;
}

}  // namespace

std::vector<double> lebesgue_sequence(const FiniteSampledSystem& sys, const OpenCoverSpec& cover,
                                      int n_max) {
    cover.validate_for(sys);
    if (n_max < 1) throw InvalidInput("n_max must be positive", "n_max");

    const std::size_t count = sys.size();
    std::vector<std::vector<char>> in_cover(cover.elements().size(), std::vector<char>(count, 0));
    for (std::size_t u = 0; u < cover.elements().size(); ++u) {
        for (PointIndex p : cover.elements()[u]) in_cover[u][p] = 1;
    }

    std::vector<std::vector<PointIndex>> level = cover.elements();
    std::sort(level.begin(), level.end());
    level.erase(std::unique(level.begin(), level.end()), level.end());

    std::vector<PointIndex> iterate(count);  // f^{n-1}
    for (std::size_t i = 0; i < count; ++i) iterate[i] = static_cast<PointIndex>(i);

    std::vector<double> out;
    std::vector<char> mask(count, 0);
    for (int n = 1; n <= n_max; ++n) {
        if (n > 1) {
            for (auto& p : iterate) p = sys.image(p);
            std::vector<std::vector<PointIndex>> next;
            for (const auto& e : level) {
                for (const auto& u : in_cover) {
                    std::vector<PointIndex> part;
                    for (PointIndex x : e) {
                        if (u[iterate[x]]) part.push_back(x);
                    }
                    if (!part.empty()) next.push_back(std::move(part));
                }
            }
            std::sort(next.begin(), next.end());
            next.erase(std::unique(next.begin(), next.end()), next.end());
            level = std::move(next);
        }
        if (level.empty()) throw InternalError("refined cover is empty");

        std::vector<double> reach(count, 0.0);
        for (const auto& e : level) accumulate_reach(sys, e, mask, reach);
        out.push_back(*std::min_element(reach.begin(), reach.end()));
    }
    return out;
}

namespace {

std::size_t greedy_count(const FiniteSampledSystem& sys, double eps) {
    const std::size_t count = sys.size();
    std::vector<char> covered(count, 0);
    std::size_t centers = 0;
    for (std::size_t c = 0; c < count; ++c) {
        if (covered[c]) continue;
        ++centers;
        for (std::size_t y = 0; y < count; ++y) {
            if (sys.dist(static_cast<PointIndex>(c), static_cast<PointIndex>(y)) < eps) covered[y] = 1;
        }
    }
    return centers;
}

}  // namespace

DimensionEstimate box_dimension_estimate(const FiniteSampledSystem& sys,
                                         std::span<const double> scales, Parallelism par) {
    if (scales.size() < 2) throw InvalidInput("scale list unusable: need at least two scales", "scales");
    const double diam = sys.diameter();
    const double resolution = sys.resolution();
    for (std::size_t i = 0; i < scales.size(); ++i) {
        const double s = scales[i];
        if (!(s > 0.0)) throw InvalidInput("scale list unusable: scales must be positive", "scales");
        if (i > 0 && !(s < scales[i - 1])) {
            throw InvalidInput("scale list unusable: scales must be strictly descending", "scales");
        }
        if (!(s < diam)) throw InvalidInput("scale list unusable: scale not below sample diameter", "scales");
        if (s < resolution) throw InvalidInput("scale below sample resolution", "scales");
    }

    DimensionEstimate est;
    est.scales.assign(scales.begin(), scales.end());
    est.covering_counts.assign(scales.size(), 0);
    {
        const unsigned workers = std::max(1u, std::min<unsigned>(par.workers, scales.size()));
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t i = w; i < scales.size(); i += workers) {
                    est.covering_counts[i] = greedy_count(sys, scales[i]);
                }
            });
        }
    }
    // Monotone envelope: greedy nets are not guaranteed monotone in eps.
    for (std::size_t i = 1; i < est.covering_counts.size(); ++i) {
        est.covering_counts[i] = std::max(est.covering_counts[i], est.covering_counts[i - 1]);
    }

    est.slope_lower = std::numeric_limits<double>::infinity();
    est.slope_upper = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < scales.size(); ++i) {
        const double dn = std::log(static_cast<double>(est.covering_counts[i + 1])) -
                          std::log(static_cast<double>(est.covering_counts[i]));
        const double de = std::log(scales[i]) - std::log(scales[i + 1]);
        const double slope = dn / de;
        est.slope_lower = std::min(est.slope_lower, slope);
        est.slope_upper = std::max(est.slope_upper, slope);
    }
    return est;
}

}  // namespace expanse
