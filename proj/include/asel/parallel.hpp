#pragma once

#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace asel {

// Execution policy for the embarrassingly parallel loops (Monte Carlo
// replications, per-subset reward sweeps, pipeline splits). Serial is the
// reference path; Parallel must produce bit-identical results because every
// unit derives its own seed and writes to its own slot, and reductions happen
// serially afterwards. Tests compare the two paths directly.
enum class Exec { Serial, Parallel };

// Global worker count for Exec::Parallel. 0 means "hardware default".
void set_thread_count(int n);
int thread_count();

namespace detail {
int resolved_threads();
}

template <typename Body>
void parallel_for(std::int64_t n, const Body& body,
                  Exec exec = Exec::Parallel) {
#ifdef _OPENMP
  const int threads = detail::resolved_threads();
  if (exec == Exec::Parallel && threads > 1 && n > 1) {
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (std::int64_t i = 0; i < n; ++i) {
      body(i);
    }
    return;
  }
#else
  (void)exec;
#endif
  for (std::int64_t i = 0; i < n; ++i) {
    body(i);
  }
}

}  // namespace asel
