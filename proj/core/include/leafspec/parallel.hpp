#pragma once

#include <cstddef>
#include <functional>

namespace leafspec {

/// Number of worker threads the library may use. Honors LEAFSPEC_THREADS.
std::size_t max_threads();

/// Calls body(i) for every i in [0, count). Iterations must be independent;
/// each writes only its own output slot, so results are deterministic.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace leafspec
