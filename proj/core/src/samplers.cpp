#include "expanse/samplers.hpp"

#include <algorithm>
#include <cmath>

#include "expanse/error.hpp"

namespace expanse {

FiniteSampledSystem two_point_system(double distance, bool swap) {
    if (!(distance > 0.0)) throw InvalidInput("distance must be positive", "dist");
    std::vector<double> dist{0.0, distance, distance, 0.0};
    std::vector<PointIndex> map = swap ? std::vector<PointIndex>{1, 0} : std::vector<PointIndex>{0, 1};
    return FiniteSampledSystem(2, std::move(dist), std::move(map));
}

FiniteSampledSystem circle_grid(std::size_t count, std::size_t rotation_steps) {
    if (count == 0) throw InvalidInput("grid must be nonempty", "points");
    std::vector<PointIndex> map(count);
    for (std::size_t i = 0; i < count; ++i) map[i] = static_cast<PointIndex>((i + rotation_steps) % count);
    const double step = 1.0 / static_cast<double>(count);
    return FiniteSampledSystem::from_metric(
        count,
        [&](PointIndex a, PointIndex b) {
            const std::size_t gap = a > b ? a - b : b - a;
            return static_cast<double>(std::min(gap, count - gap)) * step;
        },
        std::move(map));
}

OpenCoverSpec partition_cover(std::span<const std::size_t> label) {
    if (label.empty()) throw InvalidInput("empty labelling", "cover");
    const std::size_t classes = *std::max_element(label.begin(), label.end()) + 1;
    std::vector<std::vector<PointIndex>> elements(classes);
    for (std::size_t p = 0; p < label.size(); ++p) elements[label[p]].push_back(static_cast<PointIndex>(p));
    std::erase_if(elements, [](const auto& e) { return e.empty(); });
    return OpenCoverSpec(std::move(elements));
}

}  // namespace expanse
