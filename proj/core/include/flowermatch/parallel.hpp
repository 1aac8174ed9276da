#pragma once

#include <cstddef>
#include <functional>

namespace flowermatch {

/// Resolves a requested worker count; 0 means hardware concurrency.
std::size_t resolve_threads(std::size_t requested);

/// Calls body(i) for i in [0, count) split into contiguous chunks across
/// `threads` workers. Results must be written to per-index slots so the
/// outcome does not depend on scheduling. If any index throws, the exception
/// from the lowest failing index is rethrown on the caller's thread.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace flowermatch
