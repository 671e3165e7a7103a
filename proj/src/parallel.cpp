#include "strongmax/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>

namespace strongmax {

namespace {

int default_jobs() {
  if (const char* env = std::getenv("STRONGMAX_JOBS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::atomic<int>& jobs_setting() {
  static std::atomic<int> value{default_jobs()};
  return value;
}

}  // namespace

int jobs() { return jobs_setting().load(); }

void set_jobs(int n) { jobs_setting().store(n > 0 ? n : default_jobs()); }

void parallel_chunks(std::size_t count,
                     const std::function<void(int, std::size_t, std::size_t)>& body) {
  const auto workers = static_cast<std::size_t>(std::max(1, jobs()));
  if (workers == 1 || count < 2) {
    if (count > 0) body(0, 0, count);
    return;
  }
  const std::size_t chunk = (count + workers - 1) / workers;
  std::vector<std::thread> threads;
  std::exception_ptr failure;
  std::mutex failure_lock;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    if (begin >= count) break;
    const std::size_t end = std::min(count, begin + chunk);
    threads.emplace_back([&, w, begin, end] {
      try {
        body(static_cast<int>(w), begin, end);
      } catch (...) {
        std::lock_guard<std::mutex> guard(failure_lock);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace strongmax
