#pragma once

#include <cstddef>
#include <functional>

namespace asal {

/// Runs fn(i) for i in [0, count) on up to `workers` threads. Indices are
/// handed out dynamically; callers write results into slot i so the output
/// never depends on scheduling. The first exception thrown is rethrown.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn);

int default_workers();

}  // namespace asal
