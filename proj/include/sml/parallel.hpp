#pragma once

#include <cstddef>
#include <functional>

namespace sml {

/// 0 means one worker per hardware thread.
unsigned resolve_workers(unsigned requested) noexcept;

/// Runs body(i) for i in [0, count) on up to `workers` threads. Results must be
/// written to per-index slots; scheduling order is unspecified. If any call
/// throws, the exception from the lowest index is rethrown after all workers stop.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& body);

}  // namespace sml
