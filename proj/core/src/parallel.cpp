#include "bethelab/parallel.hpp"

#include <atomic>
#include <exception>
#include <stdexcept>
#include <thread>
#include <vector>

namespace bethe {

int resolve_workers(int requested)
{
    if (requested > 0)
        return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void run_chunked(std::size_t count, std::size_t chunk_size, int workers,
                 const std::function<void(const ChunkRange&)>& body)
{
    if (chunk_size == 0)
        throw std::invalid_argument("run_chunked: chunk_size must be > 0");
    if (count == 0)
        return;

    const std::size_t n_chunks = (count + chunk_size - 1) / chunk_size;
    workers = resolve_workers(workers);
    if (workers == 1 || n_chunks == 1) {
        for (std::size_t c = 0; c < n_chunks; ++c) {
            const std::size_t b = c * chunk_size;
            body({b, std::min(b + chunk_size, count), c});
        }
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};

    auto worker = [&] {
        for (;;) {
            const std::size_t c = next.fetch_add(1);
            if (c >= n_chunks || failed.load())
                return;
            const std::size_t b = c * chunk_size;
            try {
                body({b, std::min(b + chunk_size, count), c});
            } catch (...) {
                if (!failed.exchange(true))
                    error = std::current_exception();
                return;
            }
        }
    };

    std::vector<std::thread> threads;
    const int n_threads = static_cast<int>(
        std::min<std::size_t>(static_cast<std::size_t>(workers), n_chunks));
    threads.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t)
        threads.emplace_back(worker);
    for (auto& t : threads)
        t.join();
    if (failed.load())
        std::rethrow_exception(error);
}

} // namespace bethe
