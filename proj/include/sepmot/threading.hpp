#pragma once

#include <functional>

namespace sepmot {

/// Caps the worker count used by parallel_for. 0 restores hardware default.
void set_max_threads(int n);
int max_threads();

/// Runs f(i) for i in [0, n) on static contiguous chunks. Each index is
/// evaluated exactly once and must write only its own output slots, so
/// results are bit-identical for any thread count.
void parallel_for(int n, const std::function<void(int)>& f);

}  // namespace sepmot
