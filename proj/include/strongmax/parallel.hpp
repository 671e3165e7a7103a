#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace strongmax {

/// Worker count used by parallel sweeps. Defaults to STRONGMAX_JOBS when set,
/// else the hardware concurrency.
int jobs();
void set_jobs(int n);

/// Runs body(worker, begin, end) over contiguous chunks of [0, count).
/// Each worker id in [0, jobs()) receives at most one chunk.
void parallel_chunks(std::size_t count,
                     const std::function<void(int, std::size_t, std::size_t)>& body);

/// Worker-local accumulators merged by the caller after a parallel sweep.
template <typename T>
std::vector<T> per_worker(const T& init) {
  return std::vector<T>(static_cast<std::size_t>(jobs()), init);
}

}  // namespace strongmax
