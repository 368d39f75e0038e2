#ifndef RRD_PARALLEL_HPP
#define RRD_PARALLEL_HPP

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rrd {

// threads == 0 means "all available"; threads == 1 selects the serial
// reference path (no OpenMP region at all).
inline int effective_threads(int threads) {
#ifdef _OPENMP
  if (threads <= 0) return omp_get_max_threads();
  return threads;
#else
  (void)threads;
  return 1;
#endif
}

// Data-parallel index loop. Each body(i) must write only to slot i of the
// caller's output so that serial and parallel runs produce identical bits;
// reductions are done by the caller over the filled arrays in index order.
template <class Body>
void parallel_for(std::size_t n, int threads, Body&& body) {
  int k = effective_threads(threads);
  if (k <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(k)
  for (long long i = 0; i < static_cast<long long>(n); ++i)
    body(static_cast<std::size_t>(i));
#else
  for (std::size_t i = 0; i < n; ++i) body(i);
#endif
}

}  // namespace rrd

#endif  // RRD_PARALLEL_HPP
