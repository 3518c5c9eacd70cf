#pragma once

#include <cstddef>

#include "expanse/sampled.hpp"

namespace expanse {

/// Two points at the given distance; `swap` selects the transposition,
/// otherwise the identity.
FiniteSampledSystem two_point_system(double distance, bool swap);

/// `count` equally spaced points on the circle R/Z with arc-length metric,
/// mapped by rotation through `rotation_steps` grid steps.
FiniteSampledSystem circle_grid(std::size_t count, std::size_t rotation_steps = 1);

/// Zero-cylinder-style partition: element k holds the points with `label[p] == k`.
OpenCoverSpec partition_cover(std::span<const std::size_t> label);

}  // namespace expanse
