#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <iterator>
#include <thread>
#include <vector>

namespace eeg {

/// Runs `produce(i, out)` for every i in [0, n) across `workers` threads and
/// concatenates the per-index outputs in index order, so the result does not
/// depend on scheduling. The first exception (by index) is rethrown.
template <class T, class Fn>
std::vector<T> parallel_collect(std::size_t n, unsigned workers, Fn&& produce) {
  const std::size_t chunk_count =
      std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1u, workers)) * 8);
  std::vector<std::vector<T>> chunks(chunk_count);
  std::vector<std::exception_ptr> errors(chunk_count);

  auto run_chunk = [&](std::size_t c) {
    const std::size_t begin = n * c / chunk_count;
    const std::size_t end = n * (c + 1) / chunk_count;
    try {
      for (std::size_t i = begin; i < end; ++i) produce(i, chunks[c]);
    } catch (...) {
      errors[c] = std::current_exception();
    }
  };

  if (workers <= 1 || chunk_count <= 1) {
    for (std::size_t c = 0; c < chunk_count; ++c) run_chunk(c);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    const unsigned threads = std::min<unsigned>(workers, static_cast<unsigned>(chunk_count));
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t c = next++; c < chunk_count; c = next++) run_chunk(c);
      });
    }
  }

  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::size_t total = 0;
  for (const auto& c : chunks) total += c.size();
  std::vector<T> out;
  out.reserve(total);
  for (auto& c : chunks) std::move(c.begin(), c.end(), std::back_inserter(out));
  return out;
}

}  // namespace eeg
