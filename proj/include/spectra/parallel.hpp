/* parallel.hpp -- deterministic parallel map. Results are written by input
 * index, so output order never depends on scheduling. */

#ifndef SPECTRA_PARALLEL_HPP_
#define SPECTRA_PARALLEL_HPP_

#include <atomic>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace spectra {

// Global worker cap (the CLI --threads flag); default 1.
void set_thread_count(int n);
int thread_count();

// out[i] = fn(i) for i in [0, n), with up to thread_count() workers.
// Exceptions from fn are rethrown (first by index).
void parallel_for_index(size_t n, const std::function<void(size_t)>& fn);

template <class In, class Out>
std::vector<Out> parallel_map(const std::vector<In>& in,
                              const std::function<Out(const In&)>& fn) {
    std::vector<Out> out(in.size());
    parallel_for_index(in.size(), [&](size_t i) { out[i] = fn(in[i]); });
    return out;
}

}  // namespace spectra

#endif  // SPECTRA_PARALLEL_HPP_
