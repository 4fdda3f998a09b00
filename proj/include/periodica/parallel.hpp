#pragma once

#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace periodica {

// Index-parallel loop over [0, n).  Each body writes only to its own
// preallocated slot, so results are identical to the serial order regardless
// of scheduling.  threads <= 1 (or no OpenMP) runs the serial reference path.
// An exception escaping the body is rethrown after the loop; when several
// iterations throw, the lowest index wins, matching what serial order reports.
template <class F>
void parallel_for(long n, int threads, F&& body) {
#ifdef _OPENMP
    if (threads > 1) {
        std::exception_ptr err;
        long err_index = -1;
#pragma omp parallel for num_threads(threads) schedule(dynamic, 1)
        for (long i = 0; i < n; ++i) {
            try {
                body(i);
            } catch (...) {
#pragma omp critical(periodica_parallel_for_err)
                if (err_index < 0 || i < err_index) {
                    err = std::current_exception();
                    err_index = i;
                }
            }
        }
        if (err) std::rethrow_exception(err);
        return;
    }
#else
    (void)threads;
#endif
    for (long i = 0; i < n; ++i) body(i);
}

inline int hardware_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace periodica
