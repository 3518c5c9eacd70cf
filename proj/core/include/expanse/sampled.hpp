#pragma once

// Finite metric samples of a dynamical system: Bowen distances, expansive
// constant and Lipschitz estimates, Lebesgue numbers of dynamically refined
// covers, and greedy box counting.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "expanse/parallel.hpp"

namespace expanse {

using PointIndex = std::uint32_t;

/// Sentinel for "the refined cover has an element equal to the whole sample".
inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

/// A finite point set with a symmetric distance table and a self-map.
///
/// The inverse map is derived on construction whenever the map is a
/// bijection of the sample; a caller-supplied inverse is checked against it.
class FiniteSampledSystem {
public:
    FiniteSampledSystem(std::size_t point_count, std::vector<double> dist,
                        std::vector<PointIndex> map,
                        std::optional<std::vector<PointIndex>> inverse_map = std::nullopt);

    /// Builds the distance table from a metric callback (evaluated on i < j only).
    static FiniteSampledSystem from_metric(std::size_t point_count,
                                           const std::function<double(PointIndex, PointIndex)>& metric,
                                           std::vector<PointIndex> map);

    std::size_t size() const noexcept { return count_; }
    double dist(PointIndex i, PointIndex j) const noexcept { return dist_[i * count_ + j]; }
    PointIndex image(PointIndex i) const noexcept { return map_[i]; }
    bool invertible() const noexcept { return inverse_.has_value(); }

    std::span<const double> distances() const noexcept { return dist_; }
    std::span<const PointIndex> map() const noexcept { return map_; }
    const std::optional<std::vector<PointIndex>>& inverse_map() const noexcept { return inverse_; }

    /// f^k as an index table; negative k requires an invertible sample.
    std::vector<PointIndex> power(long k) const;

    double diameter() const noexcept;
    /// Smallest positive distance; +inf for a single point.
    double resolution() const noexcept;

private:
    std::size_t count_;
    std::vector<double> dist_;
    std::vector<PointIndex> map_;
    std::optional<std::vector<PointIndex>> inverse_;
};

/// A cover of the sample by nonempty index sets (sorted, deduplicated).
class OpenCoverSpec {
public:
    explicit OpenCoverSpec(std::vector<std::vector<PointIndex>> elements);

    /// Throws InvalidInput unless every index is in range and the union is the
    /// whole sample.
    void validate_for(const FiniteSampledSystem& sys) const;

    const std::vector<std::vector<PointIndex>>& elements() const noexcept { return elements_; }
    double diameter(const FiniteSampledSystem& sys) const;

private:
    std::vector<std::vector<PointIndex>> elements_;
};

/// Greedy covering counts and secant slopes of log N(eps) against -log eps.
struct DimensionEstimate {
    std::vector<double> scales;  // descending
    std::vector<std::size_t> covering_counts;
    double slope_lower = 0.0;
    double slope_upper = 0.0;
};

/// max_{0<=k<n} d(f^k x, f^k y).
double bowen_distance(const FiniteSampledSystem& sys, PointIndex x, PointIndex y, int n);

/// min over distinct pairs of max_k d(f^{k step} x, f^{k step} y), k in
/// [-horizon, horizon] for invertible samples and [0, horizon] otherwise.
double expansive_constant_estimate(const FiniteSampledSystem& sys, int step, int horizon,
                                   Parallelism par = {});

/// max over distinct pairs of d(fx, fy) / d(x, y).
double lipschitz_constant_estimate(const FiniteSampledSystem& sys, Parallelism par = {});

/// Lebesgue numbers delta_1..delta_{n_max} of the refinements
/// U v f^{-1}U v ... v f^{-(n-1)}U, using distance to the complement within
/// the sample. kUnbounded when some refined element is the whole sample.
std::vector<double> lebesgue_sequence(const FiniteSampledSystem& sys, const OpenCoverSpec& cover,
                                      int n_max);

/// Greedy eps-net counts (open balls, lowest uncovered index first) per scale.
DimensionEstimate box_dimension_estimate(const FiniteSampledSystem& sys,
                                         std::span<const double> scales, Parallelism par = {});

}  // namespace expanse
