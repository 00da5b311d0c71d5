#pragma once

#ifdef HWR_HAVE_OPENMP
#include <omp.h>
#endif

namespace hwr {

/// How a kernel may use threads. threads == 0 means "runtime default".
struct ExecPolicy {
  int threads = 0;
  bool deterministic = false;  // serial kernels only, fixed summation order

  static ExecPolicy serial() { return {1, true}; }
};

inline int max_threads() {
#ifdef HWR_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

inline int resolve_threads(const ExecPolicy& p) {
  if (p.deterministic) return 1;
  return p.threads > 0 ? p.threads : max_threads();
}

inline void set_default_threads(int n) {
#ifdef HWR_HAVE_OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

}  // namespace hwr
