#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace oim {

/// Resolves a user thread count: 0 means hardware concurrency.
inline unsigned resolve_threads(unsigned requested) {
  if (requested != 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// Splits [0, total) into `blocks` contiguous ranges and runs
/// fn(block, begin, end) for each, spread over at most `threads` workers.
/// Block boundaries depend only on (total, blocks), never on threads.
/// The first exception thrown by any block is rethrown.
template <class Fn>
void for_each_block(std::uint64_t total, std::uint64_t blocks, unsigned threads, Fn&& fn) {
  if (blocks == 0) blocks = 1;
  auto bound = [&](std::uint64_t b) { return total / blocks * b + std::min(b, total % blocks); };
  threads = static_cast<unsigned>(std::min<std::uint64_t>(resolve_threads(threads), blocks));
  if (threads <= 1) {
    for (std::uint64_t b = 0; b < blocks; ++b) fn(b, bound(b), bound(b + 1));
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::uint64_t b = t; b < blocks; b += threads) fn(b, bound(b), bound(b + 1));
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace oim
