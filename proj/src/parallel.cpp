#include "polarkit/parallel.hpp"

#include <atomic>
#include <cstdlib>

namespace polarkit {
namespace {
std::atomic<int> g_threads{0};
}

void set_threads(int n) { g_threads = n < 0 ? 0 : n; }

int threads() {
  const int t = g_threads.load();
  if (t > 0) return t;
  if (const char* env = std::getenv("POLARKIT_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

}  // namespace polarkit
