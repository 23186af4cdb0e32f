#pragma once

// Chunked parallel minimum search shared by the field and group searches.
//
// The outer walk [0, outer_count) is cut into contiguous chunks handed out in
// increasing order. Each chunk reports its lexicographically first minimal
// hit; the final answer is the lexicographic minimum over (value, outer,
// inner), which is the same for any worker count or chunk size as long as
// scans never drop a pair whose value could tie the global best.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

namespace subprod::detail {

inline constexpr std::uint64_t kNoValue = std::numeric_limits<std::uint64_t>::max();

template <class Payload>
struct Hit {
  std::uint64_t value = kNoValue;
  std::uint64_t outer = 0;
  std::uint64_t inner = 0;
  std::optional<Payload> payload;

  bool better_than(const Hit& other) const {
    if (value != other.value) return value < other.value;
    if (outer != other.outer) return outer < other.outer;
    return inner < other.inner;
  }
};

class SearchState {
 public:
  SearchState(std::uint64_t floor, bool prune) : floor_(floor), prune_(prune) {}

  /// Values at or above the returned cap cannot change the final answer.
  std::uint64_t cap(std::uint64_t local_best) const {
    const std::uint64_t global = best_.load(std::memory_order_relaxed);
    const std::uint64_t global_cap = global == kNoValue ? kNoValue : global + 1;
    return std::min(local_best, global_cap);
  }

  void offer(std::uint64_t value) {
    std::uint64_t cur = best_.load(std::memory_order_relaxed);
    while (value < cur && !best_.compare_exchange_weak(cur, value)) {
    }
  }

  /// True when the chunk should stop: the value meets the proven floor.
  bool reached_floor(std::uint64_t value, std::uint64_t chunk) {
    if (!prune_ || value > floor_) return false;
    std::uint64_t cur = floor_chunk_.load(std::memory_order_relaxed);
    while (chunk < cur && !floor_chunk_.compare_exchange_weak(cur, chunk)) {
    }
    return true;
  }

  bool skip(std::uint64_t chunk) const {
    return chunk > floor_chunk_.load(std::memory_order_relaxed);
  }

  std::uint64_t floor() const noexcept { return floor_; }

 private:
  std::uint64_t floor_;
  bool prune_;
  std::atomic<std::uint64_t> best_{kNoValue};
  std::atomic<std::uint64_t> floor_chunk_{kNoValue};
};

inline void require_workers(unsigned workers) {
  if (workers == 0) throw std::invalid_argument("workers must be positive");
}

inline std::uint64_t pick_chunk_size(std::uint64_t outer_count, unsigned workers) {
  const std::uint64_t target_chunks = std::uint64_t{std::max(1u, workers)} * 16;
  return std::max<std::uint64_t>(1, (outer_count + target_chunks - 1) / target_chunks);
}

/// scan(begin, end, chunk_index, state) -> Hit<Payload>
template <class Payload, class Scan>
Hit<Payload> parallel_min(std::uint64_t outer_count, unsigned workers, std::uint64_t chunk_size,
                          SearchState& state, Scan&& scan) {
  workers = std::max(1u, workers);
  chunk_size = std::max<std::uint64_t>(1, chunk_size);
  const std::uint64_t chunks = (outer_count + chunk_size - 1) / chunk_size;
  std::vector<Hit<Payload>> results(chunks);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto work = [&] {
    try {
      for (;;) {
        const std::uint64_t c = next.fetch_add(1);
        if (c >= chunks) return;
        if (state.skip(c)) continue;
        const std::uint64_t begin = c * chunk_size;
        const std::uint64_t end = std::min(outer_count, begin + chunk_size);
        results[c] = scan(begin, end, c, state);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next.store(chunks);
    }
  };

  if (workers == 1 || chunks <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    const unsigned count = static_cast<unsigned>(std::min<std::uint64_t>(workers, chunks));
    pool.reserve(count);
    for (unsigned i = 0; i < count; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  Hit<Payload> best;
  for (auto& h : results) {
    if (h.value != kNoValue && h.better_than(best)) best = std::move(h);
  }
  return best;
}

}  // namespace subprod::detail
