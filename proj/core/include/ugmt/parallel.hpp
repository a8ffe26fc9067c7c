#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace ugmt {

/// Number of worker threads: the UGMT_WORKERS environment variable when set
/// to a positive integer, otherwise the number of logical cores.
std::size_t worker_count();

/// Calls body(i) for i in [0, n) using worker_count() threads. Each index is
/// visited exactly once; the assignment of indices to threads is irrelevant
/// to callers that write results into per-index slots.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

/// Pairwise (cascade) summation in a fixed tree order, so the result is
/// independent of how the values were produced.
double pairwise_sum(std::span<const double> values);

/// Evaluates f(i) for every index and returns the per-index results.
std::vector<double> parallel_map(std::size_t n, const std::function<double(std::size_t)>& f);

}  // namespace ugmt
