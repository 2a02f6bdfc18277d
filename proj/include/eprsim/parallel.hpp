#pragma once

#include <cstdint>
#include <functional>

namespace eprsim {

/// Runs fn(begin, end, chunk_id) over contiguous chunks of [0, total) on
/// up to `max_threads` worker threads (0 = hardware concurrency). With
/// one thread, or a small total, runs inline. Chunk boundaries depend
/// only on (total, thread count), never on scheduling.
void parallel_for_chunks(
    std::uint64_t total, std::size_t max_threads,
    const std::function<void(std::uint64_t, std::uint64_t, std::size_t)> &fn);

} // namespace eprsim
