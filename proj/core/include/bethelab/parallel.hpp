#pragma once

#include <cstddef>
#include <functional>

namespace bethe {

// Deterministic work distribution: the index range is cut into fixed-size
// chunks, workers pull chunks from an atomic counter, and any reduction the
// caller performs over chunk ids happens in ascending order after the join.
// Results therefore do not depend on the worker count.
struct ChunkRange {
    std::size_t begin;
    std::size_t end;
    std::size_t chunk_index;
};

void run_chunked(std::size_t count, std::size_t chunk_size, int workers,
                 const std::function<void(const ChunkRange&)>& body);

int resolve_workers(int requested);

} // namespace bethe
