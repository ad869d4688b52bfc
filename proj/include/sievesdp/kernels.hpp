#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sievesdp {

/// Execution policy for the data-parallel kernels. Both policies produce
/// identical results; Serial is the reference used in tests.
enum class Exec { Serial, Parallel };

void set_threads(int n);
int thread_count();

/// Calls body(i) for i in [0, n). Iterations must be independent.
template <class F>
void parallel_for(std::int64_t n, Exec exec, F&& body) {
  if (exec == Exec::Serial || n < 2) {
    for (std::int64_t i = 0; i < n; ++i) body(i);
    return;
  }
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) body(i);
}

/// Smallest i in [0, n) with fails(i), or n if none. The parallel path scans
/// in chunks and stops after the first chunk that contains a failure, so the
/// answer matches the sequential scan.
template <class F>
std::int64_t first_failure(std::int64_t n, Exec exec, F&& fails, std::int64_t chunk = 64) {
  if (exec == Exec::Serial || n < 2 || thread_count() < 2) {
    for (std::int64_t i = 0; i < n; ++i) {
      if (fails(i)) return i;
    }
    return n;
  }
  const std::int64_t block = chunk * thread_count();
  for (std::int64_t base = 0; base < n; base += block) {
    const std::int64_t end = std::min(n, base + block);
    std::int64_t found = std::numeric_limits<std::int64_t>::max();
#pragma omp parallel for schedule(dynamic, 1) reduction(min : found)
    for (std::int64_t i = base; i < end; ++i) {
      if (i < found && fails(i)) found = std::min(found, i);
    }
    if (found != std::numeric_limits<std::int64_t>::max()) return found;
  }
  return n;
}

/// In-place butterfly over a 2^bits array: for each bit b, every pair
/// (v[lo], v[hi]) with hi = lo | (1 << b) is replaced by pair(b, v[lo], v[hi]).
/// The factor for bit b only mixes indices that differ in that bit, so the
/// result equals applying the Kronecker product of the per-bit 2x2 maps.
template <class T, class Pair>
void butterfly(T* v, std::size_t bits, Exec exec, Pair&& pair) {
  const std::int64_t half = std::int64_t{1} << (bits == 0 ? 0 : bits - 1);
  for (std::size_t b = 0; b < bits; ++b) {
    const std::uint64_t bit = std::uint64_t{1} << b;
    parallel_for(bits == 0 ? 0 : half, exec, [&](std::int64_t t) {
      const auto u = static_cast<std::uint64_t>(t);
      const std::uint64_t lo = ((u >> b) << (b + 1)) | (u & (bit - 1));
      pair(b, v[lo], v[lo | bit]);
    });
  }
}

}  // namespace sievesdp
