#pragma once

#include <cstddef>

#ifdef POLYSPEC_HAS_OPENMP
#include <omp.h>
#endif

namespace polyspec {

// Batch kernels (grids, sweeps, Monte Carlo trials, search restarts) run in
// one of two modes.  `serial` is the reference implementation; `openmp`
// distributes iterations across threads.  Every kernel writes per-index
// results into preallocated slots and aggregates serially afterwards, so the
// two modes produce bitwise-identical results and `serial` stays usable as a
// test oracle for `openmp`.
enum class ExecMode { serial, openmp };

namespace detail {
inline int& thread_cap() {
  static int cap = 0;  // 0 = library default (all hardware threads)
  return cap;
}
}  // namespace detail

// Caps the number of worker threads used by ExecMode::openmp kernels.
// A cap of 0 restores the default.
inline void set_max_threads(int n) { detail::thread_cap() = n > 0 ? n : 0; }

inline int max_threads() {
#ifdef POLYSPEC_HAS_OPENMP
  int hw = omp_get_max_threads();
  int cap = detail::thread_cap();
  return (cap > 0 && cap < hw) ? cap : hw;
#else
  return 1;
#endif
}

inline bool openmp_available() {
#ifdef POLYSPEC_HAS_OPENMP
  return true;
#else
  return false;
#endif
}

// Runs f(i) for i in [0, n).  Iterations must be independent; results should
// be written to slot i of a preallocated buffer so the outcome does not
// depend on execution order.
template <class F>
void for_each_index(std::size_t n, ExecMode mode, F&& f) {
#ifdef POLYSPEC_HAS_OPENMP
  if (mode == ExecMode::openmp) {
    const long long nn = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic) num_threads(max_threads())
    for (long long i = 0; i < nn; ++i) f(static_cast<std::size_t>(i));
    return;
  }
#else
  (void)mode;
#endif
  for (std::size_t i = 0; i < n; ++i) f(i);
}

}  // namespace polyspec
