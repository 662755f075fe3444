#ifndef POINTSPEC_PARALLEL_HPP
#define POINTSPEC_PARALLEL_HPP

// OpenMP work distribution with a fixed chunk layout so that results are
// bitwise identical for any thread count (the serial path is the 1-thread
// special case and doubles as the reference for tests and benchmarks).

#include <cstddef>
#include <numeric>
#include <vector>

#ifdef POINTSPEC_HAVE_OPENMP
#include <omp.h>
#endif

namespace pointspec {

inline int& thread_budget_ref() {
  static int budget = 0;  // 0 = use OpenMP default
  return budget;
}

inline void set_max_threads(int n) { thread_budget_ref() = n; }

inline int max_threads() {
#ifdef POINTSPEC_HAVE_OPENMP
  int b = thread_budget_ref();
  return b > 0 ? b : omp_get_max_threads();
#else
  return 1;
#endif
}

// body(i) for i in [0, n); independent iterations, static schedule.
template <class F>
inline void parallel_for(std::size_t n, F&& body) {
#ifdef POINTSPEC_HAVE_OPENMP
  const int nt = max_threads();
  if (nt > 1 && n > 1) {
#pragma omp parallel for schedule(static) num_threads(nt)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
      body(static_cast<std::size_t>(i));
    return;
  }
#endif
  for (std::size_t i = 0; i < n; ++i) body(i);
}

// Deterministic sum of term(i): per-chunk serial accumulation into slots,
// then an in-order serial combine. Chunk layout does not depend on threads.
template <class F>
inline double parallel_sum(std::size_t n, F&& term) {
  constexpr std::size_t chunk = 64;
  const std::size_t nchunks = (n + chunk - 1) / chunk;
  if (nchunks <= 1) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += term(i);
    return s;
  }
  std::vector<double> partial(nchunks, 0.0);
  parallel_for(nchunks, [&](std::size_t c) {
    const std::size_t lo = c * chunk;
    const std::size_t hi = lo + chunk < n ? lo + chunk : n;
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += term(i);
    partial[c] = s;
  });
  return std::accumulate(partial.begin(), partial.end(), 0.0);
}

}  // namespace pointspec

#endif
