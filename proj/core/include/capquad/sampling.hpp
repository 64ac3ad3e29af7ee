#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

namespace capquad {

/// SplitMix64 finalizer.
[[nodiscard]] std::uint64_t mix64(std::uint64_t x);

/// Seed for stream `index` of a master seed; independent of thread layout.
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index,
                                        std::uint64_t attempt = 0);

/// Radical inverse of `index` in the given prime base, in [0, 1).
[[nodiscard]] double radical_inverse(std::uint64_t index, unsigned base);

/// Calls body(i) for i in [0, count) on up to `threads` workers. Each index is
/// visited exactly once; callers write results into per-index slots so the
/// outcome does not depend on scheduling. Exceptions are rethrown on the
/// calling thread (the one from the lowest failing index).
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

/// Worker count from CAPQUAD_THREADS, or 1 when unset or invalid.
[[nodiscard]] int threads_from_env();

}  // namespace capquad
