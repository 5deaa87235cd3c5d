// SPDX-License-Identifier: Apache-2.0

#ifndef PERISPEC_PARALLEL_HPP
#define PERISPEC_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace perispec {

/// Worker count for grid sweeps: min(hardware_concurrency, PERISPEC_THREADS).
/// PERISPEC_THREADS=1 forces sequential execution.
std::size_t worker_count();

/// Runs f(i) for i in [0, n). Iterations must be independent; results must
/// not depend on execution order.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f);

}  // namespace perispec

#endif
