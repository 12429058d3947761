#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>

namespace tcpp {

using Rng = std::mt19937_64;

/// Independent generator for a (seed, stream) pair.
Rng make_stream(std::uint64_t seed, std::uint64_t stream);

/// Draws are produced in fixed-size batches; batch b always uses stream b,
/// so results do not depend on the number of worker threads.
inline constexpr std::size_t kBatchSize = 4096;

/// Calls body(begin, end, rng) for each batch [begin, end) of [0, count),
/// spreading batches over `jobs` threads (0 = hardware concurrency). The
/// first exception thrown by any batch is rethrown after all workers stop.
void run_batches(std::size_t count, std::uint64_t seed, int jobs,
                 const std::function<void(std::size_t, std::size_t, Rng&)>& body);

}  // namespace tcpp
