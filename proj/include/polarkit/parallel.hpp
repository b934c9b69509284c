#pragma once

// Static work splitting over std::thread. Results never depend on the thread
// count: callers reduce per-chunk partials in chunk order.

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace polarkit {

/// Worker count for parallel loops; 0 means "read POLARKIT_THREADS, else 1".
void set_threads(int n);
int threads();

/// Calls body(begin, end, chunk) on contiguous chunks of [0, n). The chunk
/// layout depends only on n, so per-chunk partials reduce deterministically.
template <class Body>
void parallel_chunks(std::size_t n, std::size_t nchunks, Body&& body) {
  if (n == 0) return;
  if (nchunks == 0) nchunks = 1;
  if (nchunks > n) nchunks = n;
  const std::size_t step = (n + nchunks - 1) / nchunks;
  nchunks = (n + step - 1) / step;
  const int t = threads();
  if (t <= 1 || nchunks == 1) {
    for (std::size_t c = 0; c < nchunks; ++c) body(c * step, std::min(n, (c + 1) * step), c);
    return;
  }
  std::vector<std::exception_ptr> errs(nchunks);
  std::vector<std::thread> pool;
  const std::size_t workers = std::min<std::size_t>(t, nchunks);
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t c = w; c < nchunks; c += workers) {
        try {
          body(c * step, std::min(n, (c + 1) * step), c);
        } catch (...) {
          errs[c] = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
}

inline constexpr std::size_t kDefaultChunks = 64;

}  // namespace polarkit
