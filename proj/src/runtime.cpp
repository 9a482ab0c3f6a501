#include "fracspec/runtime.hpp"

#include <atomic>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fracspec::runtime {

namespace {

std::atomic<int> g_override{0};

int env_cap() {
  static const int cap = [] {
    const char* s = std::getenv("FRACSPEC_THREADS");
    if (!s) return 0;
    const int v = std::atoi(s);
    return v > 0 ? v : 0;
  }();
  return cap;
}

}  // namespace

int max_threads() {
  int n = 1;
#ifdef _OPENMP
  n = omp_get_max_threads();
#endif
  if (const int cap = env_cap(); cap > 0 && cap < n) n = cap;
  if (const int ovr = g_override.load(); ovr > 0) n = ovr;
  return n < 1 ? 1 : n;
}

void set_max_threads(int n) { g_override.store(n); }

}  // namespace fracspec::runtime
