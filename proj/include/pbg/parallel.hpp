#pragma once

#include <cstddef>
#include <functional>

namespace pbg {

/// Worker count from PBG_SPDC_WORKERS, else the hardware concurrency.
std::size_t default_workers();

/// Calls fn(i) for i in [0, count) on up to `workers` threads (0 = default).
/// Indices are handed out dynamically; fn must only write to slots owned by i.
/// The first exception thrown by any call is rethrown after all threads join.
void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& fn);

}  // namespace pbg
