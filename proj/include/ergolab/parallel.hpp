#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "ergolab/numeric.hpp"

namespace ergolab {

/// Process-wide worker count used by the lattice and trial loops.
void set_thread_count(unsigned threads);
unsigned thread_count();

/// Runs body(chunk_index) for chunk_index in [0, chunks) on the worker pool.
/// Each chunk is handled exactly once; no ordering between chunks.
void run_chunks(std::size_t chunks, const std::function<void(std::size_t)>& body);

/// Chunk layout that depends only on the problem size, never on the thread
/// count. Reductions built on it are bit-identical for any thread count.
struct ChunkLayout {
    std::size_t count;
    std::size_t chunks;

    explicit ChunkLayout(std::size_t count, std::size_t max_chunks = 256)
        : count(count), chunks(count == 0 ? 0 : (count < max_chunks ? count : max_chunks)) {}

    std::size_t begin(std::size_t chunk) const { return chunk * count / chunks; }
    std::size_t end(std::size_t chunk) const { return (chunk + 1) * count / chunks; }
};

/// Sum of term(i) for i in [0, count). Compensated within and across chunks,
/// partials combined in chunk order.
template <class T, class Term>
T deterministic_sum(std::size_t count, Term&& term) {
    const ChunkLayout layout(count);
    std::vector<T> partials(layout.chunks, T{});
    run_chunks(layout.chunks, [&](std::size_t c) {
        CompensatedSum<T> acc;
        for (std::size_t i = layout.begin(c); i < layout.end(c); ++i) {
            acc.add(term(i));
        }
        partials[c] = acc.value();
    });
    CompensatedSum<T> total;
    for (const T& p : partials) total.add(p);
    return total.value();
}

/// Evaluates fn(i) for i in [0, count) into a vector, in parallel.
template <class T, class Fn>
std::vector<T> parallel_map(std::size_t count, Fn&& fn) {
    std::vector<T> out(count);
    const ChunkLayout layout(count, 4096);
    run_chunks(layout.chunks, [&](std::size_t c) {
        for (std::size_t i = layout.begin(c); i < layout.end(c); ++i) out[i] = fn(i);
    });
    return out;
}

}  // namespace ergolab
