#pragma once

#include <cstddef>
#include <functional>

namespace absorbkit {

//! Number of worker threads: hardware concurrency, capped by the
//! ABSORBKIT_THREADS environment variable when set.
std::size_t worker_count();

//! Runs fn(i) for i in [0, count). Iterations must be independent; each
//! writes only its own output slot, so results never depend on the thread
//! count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace absorbkit
