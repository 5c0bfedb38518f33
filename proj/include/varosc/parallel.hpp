#ifndef VAROSC_PARALLEL_HPP_
#define VAROSC_PARALLEL_HPP_

#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace varosc {

// Worker count: explicit argument, else VAROSC_WORKERS, else hardware.
inline unsigned resolve_workers(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("VAROSC_WORKERS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

// Runs fn(i) for i in [0, count) on a chunked thread fan-out.  Results must
// be written to index-addressed slots; the chunking then has no effect on
// the output, whatever the worker count.
template <typename Fn>
void parallel_for_index(std::size_t count, unsigned workers, Fn fn) {
  workers = resolve_workers(workers);
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const std::size_t nw = std::min<std::size_t>(workers, count);
  std::vector<std::thread> pool;
  pool.reserve(nw);
  std::exception_ptr first_error;
  std::mutex err_mu;
  for (std::size_t w = 0; w < nw; ++w) {
    const std::size_t lo = count * w / nw;
    const std::size_t hi = count * (w + 1) / nw;
    pool.emplace_back([&, lo, hi]() {
      try {
        for (std::size_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> g(err_mu);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace varosc

#endif  // VAROSC_PARALLEL_HPP_
