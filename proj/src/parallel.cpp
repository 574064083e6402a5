#include "asel/parallel.hpp"

#include <Eigen/Core>

namespace asel {

namespace {

int g_thread_count = 0;  // 0 = hardware default

// All parallelism is ours: every loop body writes to its own slot and
// reductions run serially, which keeps results bit-identical across thread
// counts. Eigen's internal OpenMP would reorder GEMM summations between the
// serial and parallel paths, so it stays pinned to one thread.
struct EigenSingleThread {
  EigenSingleThread() { Eigen::setNbThreads(1); }
};
const EigenSingleThread g_eigen_single_thread;

}  // namespace

void set_thread_count(int n) {
  Eigen::setNbThreads(1);
  g_thread_count = n < 0 ? 0 : n;
}

int thread_count() { return g_thread_count; }

namespace detail {

int resolved_threads() {
#ifdef _OPENMP
  if (g_thread_count > 0) return g_thread_count;
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace detail

}  // namespace asel
