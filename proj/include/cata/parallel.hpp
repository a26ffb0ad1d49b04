#ifndef CATA_PARALLEL_HPP
#define CATA_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace cata {

/// 0 means one worker per hardware thread.
inline std::size_t resolve_workers(std::size_t requested)
{
  if (requested != 0) return requested;
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

/// Splits [0, n) into contiguous blocks and calls fn(worker, begin, end) for
/// each on its own thread. The first exception thrown is rethrown.
template <class Fn>
void parallel_blocks(std::size_t n, std::size_t workers, Fn&& fn)
{
  workers = std::max<std::size_t>(1, std::min(resolve_workers(workers), n));
  if (workers == 1) {
    fn(std::size_t{0}, std::size_t{0}, n);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = n * w / workers;
    const std::size_t end = n * (w + 1) / workers;
    threads.emplace_back([&, w, begin, end] {
      try {
        fn(w, begin, end);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

} // namespace cata

#endif // CATA_PARALLEL_HPP
