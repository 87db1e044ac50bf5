#pragma once

#include <cstddef>
#include <functional>

namespace flor {

// Worker count: set_thread_count(0) re-reads FLOR_THREADS, falling back to
// the hardware concurrency.
int thread_count();
void set_thread_count(int n);

// Runs fn(chunk_index, begin, end) over consecutive chunks of [0, n).
// Chunk boundaries depend only on n and chunk, never on the worker count, so
// per-chunk partial results merged in chunk order are reproducible across
// thread counts and runs.
void parallel_chunks(
    std::size_t n, std::size_t chunk,
    const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

// Number of chunks parallel_chunks will produce for the same arguments.
std::size_t chunk_count(std::size_t n, std::size_t chunk);

}  // namespace flor
