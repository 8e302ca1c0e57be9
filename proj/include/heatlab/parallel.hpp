#pragma once

#include <cstddef>
#include <functional>

namespace heatlab {

/// Runs body(i) for i in [0, count) on up to `jobs` threads. Results must be
/// written to slots indexed by i so that output order never depends on
/// scheduling. The first exception thrown by any body is rethrown.
void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& body);

}  // namespace heatlab
