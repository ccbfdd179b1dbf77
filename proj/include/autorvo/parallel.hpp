#pragma once

#include <cstddef>
#include <functional>

namespace autorvo {

/// Worker cap: hardware concurrency, lowered by AUTORVO_THREADS when set.
unsigned worker_count();

/// Runs fn(i) for i in [0, n). Work items must be independent; results are
/// identical for any worker count.
void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& fn);

}  // namespace autorvo
