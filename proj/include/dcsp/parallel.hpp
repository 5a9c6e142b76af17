#pragma once

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dcsp {

// Execution mode for the embarrassingly parallel trial loops.  Both modes
// produce bit-identical results: every trial derives its own substreams and
// writes into its own slot, and aggregation always runs in trial order.
// The serial path is the reference implementation.
enum class RunMode { serial, parallel };

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace dcsp
