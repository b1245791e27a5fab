#ifndef PCI_PARALLEL_HPP
#define PCI_PARALLEL_HPP

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace pci {

inline int default_threads() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

// Runs fn(chunk_index, begin, end) over [0, n) split into fixed-size chunks.
// Chunk boundaries depend only on n and chunk_size, never on the thread
// count, so per-chunk results can be merged in chunk order deterministically.
inline void parallel_chunks(
    std::size_t n, std::size_t chunk_size, int threads,
    const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
  if (n == 0) return;
  if (chunk_size == 0) chunk_size = 1;
  const std::size_t n_chunks = (n + chunk_size - 1) / chunk_size;
  if (threads <= 1 || n_chunks == 1) {
    for (std::size_t c = 0; c < n_chunks; ++c)
      fn(c, c * chunk_size, std::min(n, (c + 1) * chunk_size));
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&] {
    while (true) {
      const std::size_t c = next.fetch_add(1);
      if (c >= n_chunks) return;
      try {
        fn(c, c * chunk_size, std::min(n, (c + 1) * chunk_size));
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const int nt = std::min<std::size_t>(threads, n_chunks);
  pool.reserve(nt);
  for (int t = 0; t < nt; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace pci

#endif
